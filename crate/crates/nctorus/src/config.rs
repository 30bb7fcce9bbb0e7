//! Experiment configuration: JSON file, then command-line overrides, then
//! validation.

use std::path::{Path, PathBuf};

use nctorus_core::{critical_exponent, ThetaMatrix};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::io::{FormatError, ThetaDoc};

/// Largest lattice box side accepted for dense operator matrices.
pub const MAX_SIDE: usize = 5000;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("d = {0} is below 2")]
    Dimension(usize),
    #[error("theta is {found}-dimensional but d = {d}")]
    ThetaDimension { d: usize, found: usize },
    #[error("N_grid is empty")]
    EmptyGrid,
    #[error("N_grid must be strictly increasing: {prev} is followed by {next}")]
    GridOrder { prev: u32, next: u32 },
    #[error("r_grid entry {0} is not a positive finite number")]
    BadR(f64),
    #[error("{what} = {value} must be finite and nonnegative")]
    BadAlpha { what: &'static str, value: f64 },
    #[error("s_margin = {0} is not finite")]
    BadMargin(f64),
    #[error("N = {n} in d = {d} gives a {side}-point box; the limit is {MAX_SIDE}")]
    TooLarge { n: u32, d: usize, side: usize },
    #[error(transparent)]
    Theta(#[from] FormatError),
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Irrational default `θ₂₁ = (√5 − 1)/2`.
pub const GOLDEN_THETA: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub d: usize,
    pub theta: Vec<Vec<f64>>,
    #[serde(rename = "N_grid")]
    pub n_grid: Vec<u32>,
    pub alpha1: f64,
    pub alpha2: f64,
    /// Empty means `{1.1·r*, 1, 2}`.
    pub r_grid: Vec<f64>,
    pub s_margin: f64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            d: 2,
            theta: vec![vec![0.0, -GOLDEN_THETA], vec![GOLDEN_THETA, 0.0]],
            n_grid: vec![4, 6, 8, 10],
            alpha1: 1.0,
            alpha2: 1.0,
            r_grid: Vec::new(),
            s_margin: 0.5,
            seed: 42,
            out: None,
            format: OutputFormat::Csv,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(json: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(json).map_err(|e| ConfigError::Theta(FormatError::Json(e)))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_owned(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Replace `d` and `theta` with a validated θ matrix.
    pub fn set_theta(&mut self, theta: &ThetaMatrix) {
        self.d = theta.dim();
        self.theta = theta.rows();
    }

    pub fn theta_matrix(&self) -> Result<ThetaMatrix, ConfigError> {
        let found = self.theta.len();
        if found != self.d {
            return Err(ConfigError::ThetaDimension { d: self.d, found });
        }
        Ok(ThetaDoc {
            d: self.d,
            theta: self.theta.clone(),
        }
        .to_matrix()?)
    }

    pub fn r_star(&self) -> f64 {
        critical_exponent(self.d, self.alpha1, self.alpha2).expect("validated config")
    }

    /// The configured `r_grid`, or the default `{1.1·r*, 1, 2}`.
    pub fn effective_r_grid(&self) -> Vec<f64> {
        if self.r_grid.is_empty() {
            vec![1.1 * self.r_star(), 1.0, 2.0]
        } else {
            self.r_grid.clone()
        }
    }

    pub fn validate(&self) -> Result<ThetaMatrix, ConfigError> {
        if self.d < 2 {
            return Err(ConfigError::Dimension(self.d));
        }
        let theta = self.theta_matrix()?;
        for (what, value) in [("alpha1", self.alpha1), ("alpha2", self.alpha2)] {
            if !(value.is_finite() && value >= 0.0) {
                return Err(ConfigError::BadAlpha { what, value });
            }
        }
        if !self.s_margin.is_finite() {
            return Err(ConfigError::BadMargin(self.s_margin));
        }
        if self.n_grid.is_empty() {
            return Err(ConfigError::EmptyGrid);
        }
        for w in self.n_grid.windows(2) {
            if w[1] <= w[0] {
                return Err(ConfigError::GridOrder {
                    prev: w[0],
                    next: w[1],
                });
            }
        }
        if let Some(&r) = self.r_grid.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
            return Err(ConfigError::BadR(r));
        }
        Ok(theta)
    }

    /// Rejects any `N` whose box exceeds [`MAX_SIDE`] points.
    pub fn check_size(&self) -> Result<(), ConfigError> {
        for &n in &self.n_grid {
            box_side(self.d, n)?;
        }
        Ok(())
    }
}

/// `(2N+1)^d`, or an error above [`MAX_SIDE`].
pub fn box_side(d: usize, n: u32) -> Result<usize, ConfigError> {
    let side = (2 * n as usize + 1)
        .checked_pow(d as u32)
        .filter(|&s| s <= MAX_SIDE);
    side.ok_or(ConfigError::TooLarge {
        n,
        d,
        side: (2 * n as usize + 1).saturating_pow(d as u32),
    })
}
