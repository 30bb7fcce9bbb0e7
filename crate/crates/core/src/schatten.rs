//! Singular values, Schatten `S_p` (quasi)norms and weak `S_{p,∞}` quasinorms.
//!
//! General matrices go through a one-sided (Hestenes) Jacobi iteration,
//! which orthogonalizes columns by plane rotations until every pair is
//! orthogonal to working precision; the singular values are then the column
//! norms. It delivers small singular values to high relative accuracy, which
//! matters for `p < 1` sums. Diagonal matrices skip the iteration entirely.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

const MAX_SWEEPS: usize = 80;

/// Nonincreasing, nonnegative singular values `μ(0) ≥ μ(1) ≥ …`.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularSpectrum {
    values: Vec<f64>,
}

impl SingularSpectrum {
    /// Sorts `values` into nonincreasing order. Negative or non-finite
    /// entries are rejected.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if let Some(k) = values.iter().position(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::NonFiniteEntry { row: k, col: k });
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `μ(0)`, the operator norm.
    pub fn largest(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// `(Σ μ(k)^p)^{1/p}`; `p = ∞` gives `μ(0)`. For `p < 1` this is a quasinorm.
    ///
    /// Terms are scaled by `μ(0)` before exponentiation so tiny `μ^p` never
    /// underflow relative to the leading term.
    pub fn schatten_norm(&self, p: f64) -> Result<f64> {
        check_exponent(p)?;
        let top = self.largest();
        if p == f64::INFINITY || top == 0.0 {
            return Ok(top);
        }
        let sum: f64 = self
            .values
            .iter()
            .filter(|&&v| v > 0.0)
            .map(|&v| libm::exp(p * libm::log(v / top)))
            .sum();
        Ok(top * libm::exp(libm::log(sum) / p))
    }

    /// `sup_k (k+1)^{1/p} μ(k)`.
    pub fn weak_norm(&self, p: f64) -> Result<f64> {
        check_exponent(p)?;
        Ok(self
            .values
            .iter()
            .enumerate()
            .map(|(k, &v)| libm::pow((k + 1) as f64, 1.0 / p) * v)
            .fold(0.0, f64::max))
    }

    /// `[⌈0.05·len⌉, ⌊0.5·len⌋]`, clamped to a valid window.
    pub fn default_window(&self) -> (usize, usize) {
        let len = self.len();
        let lo = ((len as f64 * 0.05).ceil() as usize).max(1);
        let hi = (len / 2).min(len.saturating_sub(1));
        (lo, hi)
    }

    /// Least-squares fit of `log μ(k)` against `log(k+1)` for
    /// `k_min ≤ k ≤ k_max`.
    pub fn decay_exponent(&self, k_min: usize, k_max: usize) -> Result<DecayFit> {
        let len = self.len();
        if !(1 <= k_min && k_min < k_max && k_max < len) {
            return Err(Error::Window { k_min, k_max, len });
        }
        if let Some(k) = (k_min..=k_max).find(|&k| self.values[k] == 0.0) {
            return Err(Error::ZeroInWindow { k });
        }
        let pts: Vec<(f64, f64)> = (k_min..=k_max)
            .map(|k| (libm::log((k + 1) as f64), libm::log(self.values[k])))
            .collect();
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let slope = sxy / sxx;
        let intercept = my - slope * mx;
        let rss: f64 = pts
            .iter()
            .map(|p| {
                let r = p.1 - (intercept + slope * p.0);
                r * r
            })
            .sum();
        Ok(DecayFit {
            slope,
            intercept,
            residual: libm::sqrt(rss / n),
            window: (k_min, k_max),
        })
    }
}

/// Power-law fit `μ(k) ≈ e^{intercept} (k+1)^{slope}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayFit {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual in log space.
    pub residual: f64,
    pub window: (usize, usize),
}

fn check_exponent(p: f64) -> Result<()> {
    if p > 0.0 {
        Ok(())
    } else {
        Err(Error::Exponent(p))
    }
}

/// `2d / (d + 2(α₁ + α₂))`: `T_k ∈ S_r` for every `r` above it whenever
/// `k ∈ H^{α₁,α₂}`.
pub fn critical_exponent(dim: usize, alpha1: f64, alpha2: f64) -> Result<f64> {
    if dim < 2 {
        return Err(Error::Dimension { found: dim, min: 2 });
    }
    for (what, value) in [("alpha1", alpha1), ("alpha2", alpha2)] {
        if value.is_nan() || value < 0.0 {
            return Err(Error::NegativeExponent { what, value });
        }
    }
    let d = dim as f64;
    Ok(2.0 * d / (d + 2.0 * (alpha1 + alpha2)))
}

/// Singular values of a square matrix.
pub fn singular_values(a: &DenseMatrix) -> Result<SingularSpectrum> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    for i in 0..n {
        for (j, z) in a.row(i).iter().enumerate() {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFiniteEntry { row: i, col: j });
            }
        }
    }
    if a.is_diagonal() {
        return SingularSpectrum::new(a.diagonal().iter().map(|z| z.norm()).collect());
    }
    SingularSpectrum::new(jacobi_singular_values(a))
}

fn jacobi_singular_values(a: &DenseMatrix) -> Vec<f64> {
    let n = a.rows();
    // column-major copy so each column is a contiguous slice
    let mut cols: Vec<Complex64> = Vec::with_capacity(n * n);
    for j in 0..n {
        cols.extend((0..n).map(|i| a[(i, j)]));
    }
    let tol = f64::EPSILON * n as f64;
    let mut norms: Vec<f64> = (0..n).map(|j| sq_norm(&cols[j * n..(j + 1) * n])).collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n - 1 {
            for j in i + 1..n {
                let (head, tail) = cols.split_at_mut(j * n);
                let ci = &mut head[i * n..(i + 1) * n];
                let cj = &mut tail[..n];
                let alpha = norms[i];
                let beta = norms[j];
                if alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let gamma: Complex64 = ci.iter().zip(cj.iter()).map(|(x, y)| x.conj() * y).sum();
                let g = gamma.norm();
                if g <= tol * libm::sqrt(alpha) * libm::sqrt(beta) {
                    continue;
                }
                rotated = true;
                // rotate (c_i, e^{-iφ} c_j) by the real Jacobi angle
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = libm::copysign(1.0, zeta) / (libm::fabs(zeta) + libm::hypot(1.0, zeta));
                let c = 1.0 / libm::hypot(1.0, t);
                let s = c * t;
                let sp = phase.conj() * s;
                let cp = phase.conj() * c;
                for (x, y) in ci.iter_mut().zip(cj.iter_mut()) {
                    let (xi, yj) = (*x, *y);
                    *x = xi * c - yj * sp;
                    *y = xi * s + yj * cp;
                }
                norms[i] = sq_norm(ci);
                norms[j] = sq_norm(cj);
            }
        }
        if !rotated {
            break;
        }
    }
    (0..n)
        .map(|j| libm::sqrt(sq_norm(&cols[j * n..(j + 1) * n])))
        .collect()
}

#[inline]
fn sq_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}
