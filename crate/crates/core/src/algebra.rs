//! Finitely supported elements `x = Σ x̂(n) U^n` of the quantum torus.
//!
//! Products never truncate: `f ∗_σ g` lives on the Minkowski sum of the two
//! support boxes, so the algebraic identities hold exactly up to rounding.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;

use crate::cocycle::ReducedTheta;
use crate::error::{Error, Result};
use crate::lattice::{LatticeBox, MultiIndex};
use crate::matrix::{DenseMatrix, OperatorMatrix};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Fourier coefficients of an element of `T_θ^d` over a symmetric box.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusElement {
    theta: ReducedTheta,
    lattice: LatticeBox,
    coeffs: Vec<Complex64>,
}

impl TorusElement {
    pub fn from_coeffs(
        theta: ReducedTheta,
        lattice: LatticeBox,
        coeffs: Vec<Complex64>,
    ) -> Result<Self> {
        if lattice.dim() != theta.dim() {
            return Err(Error::DimensionMismatch {
                expected: theta.dim(),
                found: lattice.dim(),
            });
        }
        if coeffs.len() != lattice.cardinality() {
            return Err(Error::Length {
                expected: lattice.cardinality(),
                found: coeffs.len(),
            });
        }
        Ok(Self {
            theta,
            lattice,
            coeffs,
        })
    }

    pub fn zero(theta: ReducedTheta, lattice: LatticeBox) -> Result<Self> {
        let n = lattice.cardinality();
        Self::from_coeffs(theta, lattice, alloc::vec![ZERO; n])
    }

    /// `U^m` on `lattice`.
    pub fn monomial(theta: ReducedTheta, m: &MultiIndex, lattice: LatticeBox) -> Result<Self> {
        let idx = lattice.linear_index(m)?;
        let mut x = Self::zero(theta, lattice)?;
        x.coeffs[idx] = ONE;
        Ok(x)
    }

    /// The unit `1 = U^0` on the radius-0 box.
    pub fn unit(theta: ReducedTheta) -> Self {
        let lattice = LatticeBox::new(theta.dim(), 0).expect("theta has d >= 2");
        Self {
            theta,
            lattice,
            coeffs: alloc::vec![ONE],
        }
    }

    pub fn theta(&self) -> &ReducedTheta {
        &self.theta
    }

    pub fn lattice(&self) -> LatticeBox {
        self.lattice
    }

    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    /// Coefficients in canonical order of [`lattice`](Self::lattice).
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// `x̂(m)`, zero outside the support box.
    pub fn coeff(&self, m: &MultiIndex) -> Complex64 {
        self.coeff_raw(m.entries())
    }

    pub(crate) fn coeff_raw(&self, m: &[i64]) -> Complex64 {
        self.lattice.index_of(m).map_or(ZERO, |i| self.coeffs[i])
    }

    /// Same element re-expressed on `lattice`, dropping coefficients outside it.
    pub fn resized(&self, lattice: LatticeBox) -> Result<Self> {
        if lattice.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: lattice.dim(),
            });
        }
        let mut m = alloc::vec![0i64; lattice.dim()];
        let coeffs = (0..lattice.cardinality())
            .map(|i| {
                lattice.write_point(i, &mut m);
                self.coeff_raw(&m)
            })
            .collect();
        Self::from_coeffs(self.theta.clone(), lattice, coeffs)
    }

    /// Largest coefficient difference over the union of both supports.
    pub fn max_abs_diff(&self, other: &TorusElement) -> Result<f64> {
        self.same_algebra(other)?;
        let big = if self.lattice.radius() >= other.lattice.radius() {
            self.lattice
        } else {
            other.lattice
        };
        let a = self.resized(big)?;
        let b = other.resized(big)?;
        Ok(a.coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max))
    }

    pub(crate) fn same_algebra(&self, other: &TorusElement) -> Result<()> {
        if self.theta != other.theta {
            return Err(Error::ThetaMismatch);
        }
        Ok(())
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        self.map_coeffs(|_, v| c * v)
    }

    /// Coefficient-wise map `x̂(n) ↦ f(n, x̂(n))` on the same box.
    pub fn map_coeffs(&self, mut f: impl FnMut(&[i64], Complex64) -> Complex64) -> Self {
        let mut m = alloc::vec![0i64; self.dim()];
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                self.lattice.write_point(i, &mut m);
                f(&m, v)
            })
            .collect();
        Self {
            theta: self.theta.clone(),
            lattice: self.lattice,
            coeffs,
        }
    }

    /// `self + other` on the larger of the two boxes.
    pub fn add(&self, other: &TorusElement) -> Result<Self> {
        self.same_algebra(other)?;
        let big = if self.lattice.radius() >= other.lattice.radius() {
            self.lattice
        } else {
            other.lattice
        };
        let mut out = self.resized(big)?;
        for (o, v) in out.coeffs.iter_mut().zip(other.resized(big)?.coeffs) {
            *o += v;
        }
        Ok(out)
    }

    /// Twisted convolution `(f ∗_σ g)(m) = Σ_n f̂(m-n) ĝ(n) σ(m-n, n)`, i.e.
    /// the product `fg` in `T_θ^d`.
    pub fn twisted_convolve(&self, other: &TorusElement) -> Result<Self> {
        self.same_algebra(other)?;
        let out_box = self.lattice.minkowski_sum(&other.lattice);
        let d = self.dim();
        let left = self.lattice.coordinate_table();
        let right = other.lattice.coordinate_table();
        let mut out = alloc::vec![ZERO; out_box.cardinality()];
        let mut sum = alloc::vec![0i64; d];
        for (a, &fa) in left.chunks_exact(d).zip(&self.coeffs) {
            if fa == ZERO {
                continue;
            }
            for (b, &gb) in right.chunks_exact(d).zip(&other.coeffs) {
                if gb == ZERO {
                    continue;
                }
                for k in 0..d {
                    sum[k] = a[k] + b[k];
                }
                let idx = out_box.index_of(&sum).expect("Minkowski box holds a + b");
                out[idx] += fa * gb * self.theta.sigma_raw(a, b);
            }
        }
        Self::from_coeffs(self.theta.clone(), out_box, out)
    }

    /// `f^♯(m) = conj(σ(m, -m)) · conj(f̂(-m))`, the adjoint `x*`.
    pub fn involution(&self) -> Self {
        let mut m = alloc::vec![0i64; self.dim()];
        let coeffs = (0..self.coeffs.len())
            .map(|i| {
                self.lattice.write_point(i, &mut m);
                let reflected = self.coeffs[self.lattice.reflected(i)];
                (self.theta.self_phase(&m) * reflected).conj()
            })
            .collect();
        Self {
            theta: self.theta.clone(),
            lattice: self.lattice,
            coeffs,
        }
    }

    /// `τ(x) = x̂(0)`.
    pub fn trace(&self) -> Complex64 {
        self.coeffs[self.lattice.cardinality() / 2]
    }

    /// `⟨x, y⟩ = τ(y^♯ x) = Σ x̂(n) conj(ŷ(n))`.
    pub fn inner_product(&self, other: &TorusElement) -> Result<Complex64> {
        self.same_algebra(other)?;
        let (small, large, flip) = if self.lattice.radius() <= other.lattice.radius() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut m = alloc::vec![0i64; self.dim()];
        let mut acc = ZERO;
        for (i, &s) in small.coeffs.iter().enumerate() {
            small.lattice.write_point(i, &mut m);
            let l = large.coeff_raw(&m);
            acc += if flip { l * s.conj() } else { s * l.conj() };
        }
        Ok(acc)
    }

    /// `‖x‖₂ = (Σ |x̂(n)|²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        libm::sqrt(self.coeffs.iter().map(|z| z.norm_sqr()).sum())
    }

    /// Matrix of `η ↦ xη` on `lattice`: entry `(m, n)` is `σ(m-n, n) x̂(m-n)`.
    pub fn mult_matrix(&self, lattice: LatticeBox) -> Result<OperatorMatrix> {
        if lattice.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: lattice.dim(),
            });
        }
        let d = self.dim();
        let table = lattice.coordinate_table();
        let size = lattice.cardinality();
        let mut diff = alloc::vec![0i64; d];
        let entries = DenseMatrix::from_fn(size, size, |i, j| {
            let m = &table[i * d..(i + 1) * d];
            let n = &table[j * d..(j + 1) * d];
            for k in 0..d {
                diff[k] = m[k] - n[k];
            }
            match self.lattice.index_of(&diff) {
                Some(idx) if self.coeffs[idx] != ZERO => {
                    self.theta.sigma_raw(&diff, n) * self.coeffs[idx]
                }
                _ => ZERO,
            }
        });
        OperatorMatrix::new(lattice, entries)
    }

    /// `∂_j`, with `j` one-based: `x̂(n) ↦ 2πi n_j x̂(n)`.
    pub fn partial_derivative(&self, j: usize) -> Result<Self> {
        if j == 0 || j > self.dim() {
            return Err(Error::Direction { j, dim: self.dim() });
        }
        Ok(self.map_coeffs(|n, v| Complex64::new(0.0, TAU * n[j - 1] as f64) * v))
    }

    /// `D_j = -i ∂_j`, self-adjoint.
    pub fn d_operator(&self, j: usize) -> Result<Self> {
        Ok(self
            .partial_derivative(j)?
            .scaled(Complex64::new(0.0, -1.0)))
    }

    /// `Δ = ∂_1² + … + ∂_d²`: `x̂(n) ↦ -4π²|n|² x̂(n)`.
    pub fn laplacian(&self) -> Self {
        self.map_coeffs(|n, v| {
            let ns = crate::lattice::norm_sq(n) as f64;
            v * (-TAU * TAU * ns)
        })
    }
}
