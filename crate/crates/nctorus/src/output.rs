//! CSV and JSON rendering of experiment reports.
//!
//! Floats are written as `{:.16e}` (17 significant digits), which
//! round-trips every `f64` exactly.

use anyhow::Result;
use serde::Serialize;

use crate::config::OutputFormat;
use crate::experiments::{BoundReport, DecayReport, FactorReport, ScanReport, SuiteReport};

pub const SCAN_HEADER: [&str; 7] = [
    "N",
    "r",
    "r_star",
    "s_r_norm",
    "weak_r_norm",
    "sobolev_norm",
    "wall_ms",
];

pub fn float(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_table<const W: usize>(
    header: [&str; W],
    rows: impl IntoIterator<Item = [String; W]>,
) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn json(value: &impl Serialize) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Renders reports in the chosen format.
pub trait Render {
    fn csv(&self) -> Result<String>;

    fn json(&self) -> Result<String>;

    fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Csv => self.csv(),
            OutputFormat::Json => self.json(),
        }
    }
}

impl Render for ScanReport {
    fn csv(&self) -> Result<String> {
        csv_table(
            SCAN_HEADER,
            self.records.iter().map(|r| {
                [
                    r.n.to_string(),
                    float(r.r),
                    float(r.r_star),
                    float(r.s_r_norm),
                    float(r.weak_r_norm),
                    float(r.sobolev_norm),
                    float(r.wall_ms),
                ]
            }),
        )
    }

    fn json(&self) -> Result<String> {
        json(self)
    }
}

impl Render for DecayReport {
    fn csv(&self) -> Result<String> {
        csv_table(
            [
                "N",
                "alpha",
                "p",
                "weak_norm",
                "slope",
                "residual",
                "s_p_norm",
            ],
            self.records.iter().map(|r| {
                [
                    r.n.to_string(),
                    float(r.alpha),
                    float(r.p),
                    float(r.weak_norm),
                    float(r.slope),
                    float(r.residual),
                    float(r.s_p_norm),
                ]
            }),
        )
    }

    fn json(&self) -> Result<String> {
        json(self)
    }
}

impl Render for FactorReport {
    fn csv(&self) -> Result<String> {
        csv_table(
            [
                "N",
                "alpha1",
                "alpha2",
                "factorization_error",
                "adjoint_error",
                "wall_ms",
            ],
            self.records.iter().map(|r| {
                [
                    r.n.to_string(),
                    float(r.alpha1),
                    float(r.alpha2),
                    float(r.factorization_error),
                    float(r.adjoint_error),
                    float(r.wall_ms),
                ]
            }),
        )
    }

    fn json(&self) -> Result<String> {
        json(self)
    }
}

fn join(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")
}

impl Render for BoundReport {
    fn csv(&self) -> Result<String> {
        csv_table(
            [
                "N",
                "s0",
                "sobolev_norm",
                "worst_ratio",
                "worst_m",
                "worst_n",
            ],
            self.records.iter().map(|r| {
                [
                    r.n.to_string(),
                    float(r.s0),
                    float(r.sobolev_norm),
                    float(r.worst_ratio),
                    join(&r.worst_m),
                    join(&r.worst_n),
                ]
            }),
        )
    }

    fn json(&self) -> Result<String> {
        json(self)
    }
}

impl Render for SuiteReport {
    fn csv(&self) -> Result<String> {
        csv_table(
            ["check", "max_error", "tolerance", "passed"],
            self.checks.iter().map(|c| {
                [
                    c.name.clone(),
                    float(c.max_error),
                    float(c.tolerance),
                    c.passed.to_string(),
                ]
            }),
        )
    }

    fn json(&self) -> Result<String> {
        json(self)
    }
}
