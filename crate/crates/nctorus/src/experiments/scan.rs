use std::time::Instant;

use anyhow::Result;
use nctorus_core::{critical_exponent, random_kernel, singular_values, LatticeBox};
use rayon::prelude::*;
use serde::Serialize;

use super::{pool, relative, Check};
use crate::config::ExperimentConfig;

/// Largest relative change of `‖T_k‖_{S_r}` between the two largest radii
/// that still counts as stabilized.
pub const STABILIZATION_TOLERANCE: f64 = 0.05;

const MONOTONE_SLACK: f64 = 1e-10;
const HILBERT_SCHMIDT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ScanRecord {
    #[serde(rename = "N")]
    pub n: u32,
    pub r: f64,
    pub r_star: f64,
    pub s_r_norm: f64,
    pub weak_r_norm: f64,
    pub sobolev_norm: f64,
    pub wall_ms: f64,
    pub regime: Regime,
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    Below,
    AtThreshold,
    Above,
}

impl Regime {
    pub fn classify(r: f64, r_star: f64) -> Self {
        if relative(r, r_star) <= 1e-12 {
            Regime::AtThreshold
        } else if r < r_star {
            Regime::Below
        } else {
            Regime::Above
        }
    }
}

/// Relative change of the `S_r` norm between the two largest radii.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Stabilization {
    pub r: f64,
    pub regime: Regime,
    pub n_from: u32,
    pub n_to: u32,
    pub relative_change: f64,
    pub stable: bool,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ScanReport {
    pub records: Vec<ScanRecord>,
    pub stabilization: Vec<Stabilization>,
    pub checks: Vec<Check>,
}

struct Slice {
    n: u32,
    records: Vec<ScanRecord>,
    hs_error: f64,
}

/// One random kernel with `s_i = α_i + d/2 + s_margin` per radius, one SVD
/// per radius, then every `r` of the grid. Records come out sorted by
/// `(N, r)` whatever the scheduling.
pub fn run_theorem_scan(cfg: &ExperimentConfig) -> Result<ScanReport> {
    let theta = cfg.validate()?.reduce();
    cfg.check_size()?;
    let d = cfg.d;
    let r_star = critical_exponent(d, cfg.alpha1, cfg.alpha2)?;
    let mut rs = cfg.effective_r_grid();
    rs.sort_by(f64::total_cmp);
    rs.dedup();
    let s1 = cfg.alpha1 + d as f64 / 2.0 + cfg.s_margin;
    let s2 = cfg.alpha2 + d as f64 / 2.0 + cfg.s_margin;

    let slices: Vec<Slice> = pool().install(|| {
        cfg.n_grid
            .par_iter()
            .map(|&n| -> Result<Slice> {
                let start = Instant::now();
                let lattice = LatticeBox::new(d, n)?;
                let k = random_kernel(theta.clone(), lattice, s1, s2, cfg.seed)?;
                let spectrum = singular_values(k.matrix()?.matrix())?;
                let sobolev = k.mixed_sobolev_norm(cfg.alpha1, cfg.alpha2)?;
                let hs_error = relative(spectrum.schatten_norm(2.0)?, k.l2_norm());
                let mut records = rs
                    .iter()
                    .map(|&r| {
                        Ok(ScanRecord {
                            n,
                            r,
                            r_star,
                            s_r_norm: spectrum.schatten_norm(r)?,
                            weak_r_norm: spectrum.weak_norm(r)?,
                            sobolev_norm: sobolev,
                            wall_ms: 0.0,
                            regime: Regime::classify(r, r_star),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                let ms = start.elapsed().as_secs_f64() * 1e3;
                records.iter_mut().for_each(|rec| rec.wall_ms = ms);
                Ok(Slice {
                    n,
                    records,
                    hs_error,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut slices = slices;
    slices.sort_by_key(|s| s.n);
    let hs_error = slices.iter().map(|s| s.hs_error).fold(0.0, f64::max);
    let by_n: Vec<&[ScanRecord]> = slices.iter().map(|s| s.records.as_slice()).collect();

    let mut monotone = 0.0f64;
    for w in by_n.windows(2) {
        for (a, b) in w[0].iter().zip(w[1]) {
            if a.s_r_norm > 0.0 {
                monotone = monotone.max((a.s_r_norm - b.s_r_norm) / a.s_r_norm);
            }
        }
    }

    let stabilization = match by_n.as_slice() {
        [.., prev, last] => prev
            .iter()
            .zip(last.iter())
            .map(|(a, b)| {
                let change = relative(b.s_r_norm, a.s_r_norm);
                Stabilization {
                    r: a.r,
                    regime: a.regime,
                    n_from: a.n,
                    n_to: b.n,
                    relative_change: change,
                    stable: change < STABILIZATION_TOLERANCE,
                }
            })
            .collect(),
        _ => Vec::new(),
    };

    let records: Vec<ScanRecord> = slices.into_iter().flat_map(|s| s.records).collect();
    let r_star_drift = records
        .iter()
        .filter(|rec| rec.r_star.to_bits() != r_star.to_bits())
        .count();
    let checks = vec![
        Check::new("r_star_column", r_star_drift as f64, 0.0),
        Check::new("monotone_in_N", monotone.max(0.0), MONOTONE_SLACK),
        Check::new("hilbert_schmidt", hs_error, HILBERT_SCHMIDT_TOLERANCE),
    ];
    Ok(ScanReport {
        records,
        stabilization,
        checks,
    })
}
