//! Fourier multipliers `T_g x = Σ g(n) x̂(n) U^n`, Bessel and Riesz potentials.
//!
//! The Riesz symbol is set to `0` at the origin, so `I^α` annihilates the
//! mean `x̂(0)`; it is a genuine multiplier only on the mean-zero subspace.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

use crate::algebra::TorusElement;
use crate::error::{Error, Result};
use crate::lattice::{norm_sq, LatticeBox};
use crate::matrix::{DenseMatrix, OperatorMatrix};

/// Values below this are flushed to zero.
pub const FLUSH_THRESHOLD: f64 = 1e-300;

/// `(1 + |n|²)^{α/2}` from `|n|²`, via exp/log.
#[inline]
pub fn bessel_weight(norm_sq: i64, alpha: f64) -> f64 {
    flush(libm::exp(0.5 * alpha * libm::log1p(norm_sq as f64)))
}

/// `|n|^α` from `|n|²`, with `0` at the origin.
#[inline]
pub fn riesz_weight(norm_sq: i64, alpha: f64) -> f64 {
    if norm_sq == 0 {
        return 0.0;
    }
    flush(libm::exp(0.5 * alpha * libm::log(norm_sq as f64)))
}

#[inline]
fn flush(v: f64) -> f64 {
    if v < FLUSH_THRESHOLD {
        0.0
    } else {
        v
    }
}

type SymbolFn = dyn Fn(&[i64]) -> Complex64 + Send + Sync;

/// A named function `Z^d → C`.
#[derive(Clone)]
pub struct Symbol {
    name: String,
    eval: Arc<SymbolFn>,
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Symbol").field("name", &self.name).finish()
    }
}

impl Symbol {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(&[i64]) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            eval: Arc::new(f),
        }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new("constant", move |_| c)
    }

    /// `J_α(n) = (1 + |n|²)^{α/2}`.
    pub fn bessel(alpha: f64) -> Self {
        let mut name = String::from("bessel(");
        name.push_str(&alpha.to_string());
        name.push(')');
        Self::new(name, move |n| {
            Complex64::new(bessel_weight(norm_sq(n), alpha), 0.0)
        })
    }

    /// `I_α(n) = |n|^α`, and `0` at `n = 0`.
    pub fn riesz(alpha: f64) -> Self {
        let mut name = String::from("riesz(");
        name.push_str(&alpha.to_string());
        name.push(')');
        Self::new(name, move |n| {
            Complex64::new(riesz_weight(norm_sq(n), alpha), 0.0)
        })
    }

    /// Pointwise product `g · h`.
    pub fn product(&self, other: &Symbol) -> Self {
        let (a, b) = (self.eval.clone(), other.eval.clone());
        let mut name = self.name.clone();
        name.push('*');
        name.push_str(&other.name);
        Self::new(name, move |n| a(n) * b(n))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `g(n)`, rejecting non-finite values with the offending index.
    pub fn evaluate(&self, n: &[i64]) -> Result<Complex64> {
        let v = (self.eval)(n);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::Symbol {
                name: self.name.clone(),
                index: n.to_vec(),
            })
        }
    }

    /// `T_g x`.
    pub fn apply(&self, x: &TorusElement) -> Result<TorusElement> {
        let mut failure = None;
        let out = x.map_coeffs(|n, v| match self.evaluate(n) {
            Ok(g) => g * v,
            Err(e) => {
                failure.get_or_insert(e);
                v
            }
        });
        match failure {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }

    /// `diag(g(m))` over `lattice` in canonical order.
    pub fn matrix(&self, lattice: LatticeBox) -> Result<OperatorMatrix> {
        let values = self.values(lattice)?;
        OperatorMatrix::new(lattice, DenseMatrix::diagonal_from(&values))
    }

    /// `g` sampled at every point of `lattice`.
    pub fn values(&self, lattice: LatticeBox) -> Result<Vec<Complex64>> {
        let mut m = alloc::vec![0i64; lattice.dim()];
        (0..lattice.cardinality())
            .map(|i| {
                lattice.write_point(i, &mut m);
                self.evaluate(&m)
            })
            .collect()
    }
}

/// `T_g x`.
pub fn apply_multiplier(g: &Symbol, x: &TorusElement) -> Result<TorusElement> {
    g.apply(x)
}

/// Diagonal matrix of `T_g` on `lattice`.
pub fn multiplier_matrix(g: &Symbol, lattice: LatticeBox) -> Result<OperatorMatrix> {
    g.matrix(lattice)
}

/// Potential Sobolev norm `‖J^α x‖₂ = (Σ (1+|n|²)^α |x̂(n)|²)^{1/2}`.
pub fn sobolev_norm(x: &TorusElement, alpha: f64) -> f64 {
    let lattice = x.lattice();
    let mut m = alloc::vec![0i64; lattice.dim()];
    let s: f64 = x
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            lattice.write_point(i, &mut m);
            let w = bessel_weight(norm_sq(&m), alpha);
            w * w * v.norm_sqr()
        })
        .sum();
    libm::sqrt(s)
}

/// Nonincreasing singular values of `J^{-α}` on `lattice`: the sorted
/// values `(1+|n|²)^{-α/2}`.
pub fn bessel_potential_spectrum(lattice: LatticeBox, alpha: f64) -> Vec<f64> {
    let mut m = alloc::vec![0i64; lattice.dim()];
    let mut v: Vec<f64> = (0..lattice.cardinality())
        .map(|i| {
            lattice.write_point(i, &mut m);
            bessel_weight(norm_sq(&m), -alpha)
        })
        .collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}
