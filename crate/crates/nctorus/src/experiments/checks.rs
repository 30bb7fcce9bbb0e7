use std::time::Instant;

use anyhow::{ensure, Result};
use nctorus_core::multipliers::bessel_potential_spectrum;
use nctorus_core::{multiplier_matrix, random_kernel, LatticeBox, SingularSpectrum, Symbol};
use rayon::prelude::*;
use serde::Serialize;

use super::{pool, relative, Check};
use crate::config::{box_side, ExperimentConfig};

const SLOPE_TOLERANCE: f64 = 0.1;
const WEAK_NORM_TOLERANCE: f64 = 0.2;
const FACTOR_TOLERANCE: f64 = 1e-12;
const SCHWARTZ_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct DecayRecord {
    #[serde(rename = "N")]
    pub n: u32,
    pub alpha: f64,
    pub p: f64,
    pub weak_norm: f64,
    pub slope: f64,
    pub residual: f64,
    pub s_p_norm: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct DecayReport {
    pub records: Vec<DecayRecord>,
    pub target_slope: f64,
    pub checks: Vec<Check>,
}

/// Spectra of `J^{-α}` on each box, read off the diagonal. The weak norm is
/// taken at `p = d/α` and the slope fitted over the default window.
///
/// Checks: fitted slope within 0.1 of `-α/d` on the largest box, weak norm
/// nondecreasing in `N` and within 20% between the two largest boxes. The
/// `S_p` norm at the same `p` grows without bound and is only recorded.
pub fn run_potential_decay(d: usize, alpha: f64, n_grid: &[u32]) -> Result<DecayReport> {
    ensure!(d >= 2, "d = {d} is below 2");
    ensure!(
        alpha.is_finite() && alpha > 0.0,
        "alpha = {alpha} must be positive"
    );
    ensure!(!n_grid.is_empty(), "N grid is empty");
    ensure!(
        n_grid.windows(2).all(|w| w[0] < w[1]),
        "N grid must be strictly increasing"
    );
    let p = d as f64 / alpha;
    let records = n_grid
        .iter()
        .map(|&n| {
            let spectrum =
                SingularSpectrum::new(bessel_potential_spectrum(LatticeBox::new(d, n)?, alpha))?;
            let (lo, hi) = spectrum.default_window();
            let fit = spectrum.decay_exponent(lo, hi)?;
            Ok(DecayRecord {
                n,
                alpha,
                p,
                weak_norm: spectrum.weak_norm(p)?,
                slope: fit.slope,
                residual: fit.residual,
                s_p_norm: spectrum.schatten_norm(p)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let target = -alpha / d as f64;
    let last = records.last().expect("nonempty grid");
    let mut checks = vec![Check::new(
        "decay_slope",
        (last.slope - target).abs(),
        SLOPE_TOLERANCE,
    )];
    if let [.., a, b] = records.as_slice() {
        let drop = records
            .windows(2)
            .map(|w| (w[0].weak_norm - w[1].weak_norm) / w[0].weak_norm)
            .fold(0.0, f64::max);
        checks.push(Check::new("weak_norm_monotone", drop, 1e-12));
        checks.push(Check::new(
            "weak_norm_stable",
            relative(b.weak_norm, a.weak_norm),
            WEAK_NORM_TOLERANCE,
        ));
    }
    Ok(DecayReport {
        records,
        target_slope: target,
        checks,
    })
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct FactorRecord {
    #[serde(rename = "N")]
    pub n: u32,
    pub alpha1: f64,
    pub alpha2: f64,
    pub factorization_error: f64,
    pub adjoint_error: f64,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct FactorReport {
    pub records: Vec<FactorRecord>,
    pub checks: Vec<Check>,
}

/// Assembles `J^{α₁}·T_k` and `T_{(J^{α₁}⊗J^{α₂})k}·J^{-α₂}` as matrices
/// on each box and reports their relative Frobenius distance, along with
/// the distance between the flipped kernel's matrix and the adjoint.
pub fn run_factorization_check(cfg: &ExperimentConfig) -> Result<FactorReport> {
    let theta = cfg.validate()?.reduce();
    cfg.check_size()?;
    let (a1, a2) = (cfg.alpha1, cfg.alpha2);
    let d = cfg.d as f64;
    let (s1, s2) = (a1 + d / 2.0 + cfg.s_margin, a2 + d / 2.0 + cfg.s_margin);
    let mut records = pool().install(|| {
        cfg.n_grid
            .par_iter()
            .map(|&n| -> Result<FactorRecord> {
                let start = Instant::now();
                let lattice = LatticeBox::new(cfg.d, n)?;
                let k = random_kernel(theta.clone(), lattice, s1, s2, cfg.seed)?;
                let tk = k.matrix()?;
                let lhs = multiplier_matrix(&Symbol::bessel(a1), lattice)?.matmul(tk.matrix())?;
                let rhs = k
                    .sobolev_lift(a1, a2)
                    .matrix()?
                    .matmul(multiplier_matrix(&Symbol::bessel(-a2), lattice)?.matrix())?;
                let adjoint = k.flip_adjoint()?.matrix()?;
                Ok(FactorRecord {
                    n,
                    alpha1: a1,
                    alpha2: a2,
                    factorization_error: rhs.relative_error(&lhs)?,
                    adjoint_error: adjoint.relative_error(&tk.adjoint())?,
                    wall_ms: start.elapsed().as_secs_f64() * 1e3,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    records.sort_by_key(|r| r.n);
    let worst = |f: fn(&FactorRecord) -> f64| records.iter().map(f).fold(0.0, f64::max);
    let checks = vec![
        Check::new(
            "factorization",
            worst(|r| r.factorization_error),
            FACTOR_TOLERANCE,
        ),
        Check::new("adjoint", worst(|r| r.adjoint_error), FACTOR_TOLERANCE),
    ];
    Ok(FactorReport { records, checks })
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct BoundRecord {
    #[serde(rename = "N")]
    pub n: u32,
    pub s0: f64,
    pub sobolev_norm: f64,
    pub worst_ratio: f64,
    pub worst_m: Vec<i64>,
    pub worst_n: Vec<i64>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct BoundReport {
    pub records: Vec<BoundRecord>,
    pub checks: Vec<Check>,
}

/// Worst ratio of `|b_{m,n}|` to its Sobolev bound for a random kernel
/// decaying like `(1+|m|²)^{-s/2}` with `s = α + s₀ + d/2 + s_margin` per
/// leg. `s0` defaults to `d + 1` and must exceed `d`.
pub fn run_schwartz_bound(cfg: &ExperimentConfig, s0: Option<f64>) -> Result<BoundReport> {
    let theta = cfg.validate()?.reduce();
    let d = cfg.d;
    let s0 = s0.unwrap_or(d as f64 + 1.0);
    let half = d as f64 / 2.0 + cfg.s_margin;
    let (s1, s2) = (cfg.alpha1 + s0 + half, cfg.alpha2 + s0 + half);
    let mut records = Vec::with_capacity(cfg.n_grid.len());
    for &n in &cfg.n_grid {
        box_side(d, n)?;
        let h = random_kernel(
            theta.clone(),
            LatticeBox::new(d, n)?,
            s1.max(0.0),
            s2.max(0.0),
            cfg.seed,
        )?;
        let rep = h.schwartz_coefficients(cfg.alpha1, cfg.alpha2, s0)?;
        records.push(BoundRecord {
            n,
            s0,
            sobolev_norm: rep.sobolev_norm,
            worst_ratio: rep.worst_ratio,
            worst_m: rep.worst_index.0.entries().to_vec(),
            worst_n: rep.worst_index.1.entries().to_vec(),
        });
    }
    let worst = records.iter().map(|r| r.worst_ratio).fold(0.0, f64::max);
    Ok(BoundReport {
        records,
        checks: vec![Check::new("schwartz_ratio", worst, 1.0 + SCHWARTZ_SLACK)],
    })
}
