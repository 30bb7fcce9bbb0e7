//! Noncommutative integral kernels `k = Σ c_{m,n} U^m ⊗ U^n` in
//! `L²(T_θ^d ⊗ (T_θ^d)^op)` and their integral operators
//! `T_k x = (id ⊗ τ)(k (1 ⊗ x))`.
//!
//! The second leg lives in the opposite algebra, so `(a ⊗ b)(1 ⊗ x) = a ⊗ xb`
//! and the partial trace collapses to the closed form
//!
//! ```text
//! (T_k x)^(m) = Σ_n c_{m,n} σ(-n, n) x̂(-n)
//! ```
//!
//! which is what [`NCKernel::apply`] and [`NCKernel::matrix`] evaluate. The
//! definitional route lives in [`crate::reference`].

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::algebra::TorusElement;
use crate::cocycle::ReducedTheta;
use crate::error::{Error, Result};
use crate::lattice::{norm_sq, LatticeBox, MultiIndex};
use crate::matrix::{DenseMatrix, OperatorMatrix};
use crate::multipliers::bessel_weight;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Opposite-algebra product `a ⋆ b = b a`.
pub fn op_multiply(a: &TorusElement, b: &TorusElement) -> Result<TorusElement> {
    b.twisted_convolve(a)
}

/// Coefficients `c_{m,n}` of a kernel, rows indexed by the first leg.
#[derive(Clone, Debug, PartialEq)]
pub struct NCKernel {
    theta: ReducedTheta,
    first: LatticeBox,
    second: LatticeBox,
    coeffs: Vec<Complex64>,
}

impl NCKernel {
    pub fn from_coeffs(
        theta: ReducedTheta,
        first: LatticeBox,
        second: LatticeBox,
        coeffs: Vec<Complex64>,
    ) -> Result<Self> {
        for b in [first, second] {
            if b.dim() != theta.dim() {
                return Err(Error::DimensionMismatch {
                    expected: theta.dim(),
                    found: b.dim(),
                });
            }
        }
        let expected = first.cardinality() * second.cardinality();
        if coeffs.len() != expected {
            return Err(Error::Length {
                expected,
                found: coeffs.len(),
            });
        }
        Ok(Self {
            theta,
            first,
            second,
            coeffs,
        })
    }

    pub fn zero(theta: ReducedTheta, lattice: LatticeBox) -> Result<Self> {
        let n = lattice.cardinality();
        Self::from_coeffs(theta, lattice, lattice, alloc::vec![ZERO; n * n])
    }

    /// `U^m ⊗ U^n` on `lattice × lattice`.
    pub fn monomial(
        theta: ReducedTheta,
        m: &MultiIndex,
        n: &MultiIndex,
        lattice: LatticeBox,
    ) -> Result<Self> {
        let (i, j) = (lattice.linear_index(m)?, lattice.linear_index(n)?);
        let mut k = Self::zero(theta, lattice)?;
        let side = lattice.cardinality();
        k.coeffs[i * side + j] = Complex64::new(1.0, 0.0);
        Ok(k)
    }

    /// The elementary tensor `a ⊗ b`.
    pub fn tensor(a: &TorusElement, b: &TorusElement) -> Result<Self> {
        a.same_algebra(b)?;
        let coeffs = a
            .coeffs()
            .iter()
            .flat_map(|&x| b.coeffs().iter().map(move |&y| x * y))
            .collect();
        Self::from_coeffs(a.theta().clone(), a.lattice(), b.lattice(), coeffs)
    }

    /// Wraps an operator matrix as the kernel with that matrix.
    ///
    /// Inverts `entry(m, p) = c_{m,-p} σ(p, -p)`.
    pub fn from_matrix(theta: ReducedTheta, op: &OperatorMatrix) -> Result<Self> {
        let lattice = op.lattice();
        let side = lattice.cardinality();
        let table = lattice.coordinate_table();
        let d = lattice.dim();
        let mut k = Self::zero(theta, lattice)?;
        for i in 0..side {
            for p in 0..side {
                let phase = k.theta.self_phase(&table[p * d..(p + 1) * d]);
                k.coeffs[i * side + lattice.reflected(p)] = op[(i, p)] * phase.conj();
            }
        }
        Ok(k)
    }

    pub fn theta(&self) -> &ReducedTheta {
        &self.theta
    }

    pub fn first_lattice(&self) -> LatticeBox {
        self.first
    }

    pub fn second_lattice(&self) -> LatticeBox {
        self.second
    }

    /// Row-major `c_{m,n}`: row = first-leg index, column = second-leg index.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, m: &MultiIndex, n: &MultiIndex) -> Complex64 {
        match (
            self.first.index_of(m.entries()),
            self.second.index_of(n.entries()),
        ) {
            (Some(i), Some(j)) => self.coeffs[i * self.second.cardinality() + j],
            _ => ZERO,
        }
    }

    /// `‖k‖_{L²} = (Σ |c_{m,n}|²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        libm::sqrt(self.coeffs.iter().map(|z| z.norm_sqr()).sum())
    }

    fn square_lattice(&self) -> Result<LatticeBox> {
        if self.first != self.second {
            return Err(Error::AsymmetricKernel {
                rows: self.first.radius(),
                cols: self.second.radius(),
            });
        }
        Ok(self.first)
    }

    /// `T_k x`, supported on the first-leg box.
    pub fn apply(&self, x: &TorusElement) -> Result<TorusElement> {
        if *x.theta() != self.theta {
            return Err(Error::ThetaMismatch);
        }
        let d = self.theta.dim();
        let table = self.second.coordinate_table();
        // w_n = σ(-n, n) x̂(-n) = σ(n, -n) x̂(-n)
        let mut neg = alloc::vec![0i64; d];
        let weights: Vec<Complex64> = table
            .chunks_exact(d)
            .map(|n| {
                for k in 0..d {
                    neg[k] = -n[k];
                }
                let xv = x.coeff_raw(&neg);
                if xv == ZERO {
                    ZERO
                } else {
                    self.theta.self_phase(n) * xv
                }
            })
            .collect();
        let cols = self.second.cardinality();
        let out = self
            .coeffs
            .chunks_exact(cols)
            .map(|row| row.iter().zip(&weights).map(|(c, w)| c * w).sum())
            .collect();
        TorusElement::from_coeffs(self.theta.clone(), self.first, out)
    }

    /// Matrix of `T_k` on `lattice`: entry `(m, p) = c_{m,-p} σ(p, -p)`.
    ///
    /// Column `p` holds the coefficients of `T_k U^p`; coefficients outside
    /// the kernel's boxes count as zero.
    pub fn matrix_on(&self, lattice: LatticeBox) -> Result<OperatorMatrix> {
        if lattice.dim() != self.theta.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.theta.dim(),
                found: lattice.dim(),
            });
        }
        let d = lattice.dim();
        let side = lattice.cardinality();
        let table = lattice.coordinate_table();
        let cols = self.second.cardinality();
        // column p reads c_{·,-p}; resolve -p in the second-leg box once
        let mut neg = alloc::vec![0i64; d];
        let col_source: Vec<Option<(usize, Complex64)>> = table
            .chunks_exact(d)
            .map(|p| {
                for k in 0..d {
                    neg[k] = -p[k];
                }
                self.second
                    .index_of(&neg)
                    .map(|j| (j, self.theta.self_phase(p)))
            })
            .collect();
        let row_source: Vec<Option<usize>> = table
            .chunks_exact(d)
            .map(|m| self.first.index_of(m))
            .collect();
        let entries =
            DenseMatrix::from_fn(side, side, |i, p| match (row_source[i], col_source[p]) {
                (Some(r), Some((j, phase))) => self.coeffs[r * cols + j] * phase,
                _ => ZERO,
            });
        OperatorMatrix::new(lattice, entries)
    }

    /// Matrix of `T_k` on the kernel's own (square) box.
    pub fn matrix(&self) -> Result<OperatorMatrix> {
        let lattice = self.square_lattice()?;
        self.matrix_on(lattice)
    }

    /// `(J^{α₁} ⊗ J^{α₂}) k`: `c_{m,n} ↦ (1+|m|²)^{α₁/2} (1+|n|²)^{α₂/2} c_{m,n}`.
    pub fn sobolev_lift(&self, alpha1: f64, alpha2: f64) -> Self {
        let rows = leg_weights(self.first, alpha1);
        let cols = leg_weights(self.second, alpha2);
        let coeffs = self
            .coeffs
            .chunks_exact(cols.len())
            .zip(&rows)
            .flat_map(|(row, &wr)| row.iter().zip(&cols).map(move |(c, &wc)| c * (wr * wc)))
            .collect();
        Self {
            theta: self.theta.clone(),
            first: self.first,
            second: self.second,
            coeffs,
        }
    }

    /// `‖(J^{α₁} ⊗ J^{α₂}) k‖_{L²}`, the `H^{α₁,α₂}` norm.
    pub fn mixed_sobolev_norm(&self, alpha1: f64, alpha2: f64) -> Result<f64> {
        check_nonnegative("alpha1", alpha1)?;
        check_nonnegative("alpha2", alpha2)?;
        Ok(self.sobolev_lift(alpha1, alpha2).l2_norm())
    }

    /// The kernel of `T_k*`: flip the legs, then apply `♯` on each leg.
    ///
    /// Coefficient-wise, `c'_{a,b} = conj(c_{-b,-a} σ(a,-a) σ(b,-b))`.
    pub fn flip_adjoint(&self) -> Result<Self> {
        let lattice = self.square_lattice()?;
        let side = lattice.cardinality();
        let d = lattice.dim();
        let table = lattice.coordinate_table();
        let phases: Vec<Complex64> = table
            .chunks_exact(d)
            .map(|a| self.theta.self_phase(a))
            .collect();
        let mut coeffs = alloc::vec![ZERO; side * side];
        for a in 0..side {
            for b in 0..side {
                let src = self.coeffs[lattice.reflected(b) * side + lattice.reflected(a)];
                coeffs[a * side + b] = (src * phases[a] * phases[b]).conj();
            }
        }
        Ok(Self {
            theta: self.theta.clone(),
            first: lattice,
            second: lattice,
            coeffs,
        })
    }

    /// Largest coefficient difference; boxes must agree.
    pub fn max_abs_diff(&self, other: &NCKernel) -> Result<f64> {
        if self.theta != other.theta {
            return Err(Error::ThetaMismatch);
        }
        if self.first != other.first || self.second != other.second {
            return Err(Error::AsymmetricKernel {
                rows: self.first.radius(),
                cols: other.first.radius(),
            });
        }
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Coefficient bounds from Cauchy–Schwarz against the lifted kernel.
    ///
    /// `b_{m,n} = c_{m,n}` and
    /// `|b_{m,n}| ≤ ‖h‖_{H^{α₁+s₀, α₂+s₀}} (1+|m|²)^{-(α₁+s₀)/2} (1+|n|²)^{-(α₂+s₀)/2}`.
    /// `s₀` must exceed `d` so the weights `(1+|m|²)^{-s₀/2}` are summable.
    pub fn schwartz_coefficients(
        &self,
        alpha1: f64,
        alpha2: f64,
        s0: f64,
    ) -> Result<SchwartzReport> {
        check_nonnegative("alpha1", alpha1)?;
        check_nonnegative("alpha2", alpha2)?;
        let dim = self.theta.dim();
        if s0.is_nan() || s0 <= dim as f64 {
            return Err(Error::SummabilityOrder { s0, dim });
        }
        let (e1, e2) = (alpha1 + s0, alpha2 + s0);
        let norm = self.mixed_sobolev_norm(e1, e2)?;
        let rows = leg_log_weights(self.first);
        let cols = leg_log_weights(self.second);
        let mut entries = Vec::with_capacity(self.coeffs.len());
        let mut worst = (0.0f64, 0usize, 0usize);
        for (i, row) in self.coeffs.chunks_exact(cols.len()).enumerate() {
            for (j, &b) in row.iter().enumerate() {
                let bound = norm * libm::exp(-0.5 * (e1 * rows[i] + e2 * cols[j]));
                let modulus = b.norm();
                let ratio = if modulus == 0.0 { 0.0 } else { modulus / bound };
                if ratio > worst.0 {
                    worst = (ratio, i, j);
                }
                entries.push(SchwartzEntry {
                    first: i,
                    second: j,
                    coefficient: b,
                    bound,
                    ratio,
                });
            }
        }
        Ok(SchwartzReport {
            alpha1,
            alpha2,
            s0,
            sobolev_norm: norm,
            worst_ratio: worst.0,
            worst_index: (self.first.point(worst.1), self.second.point(worst.2)),
            entries,
        })
    }
}

/// One index of a [`SchwartzReport`].
#[derive(Clone, Debug, PartialEq)]
pub struct SchwartzEntry {
    /// Linear index of `m` in the first-leg box.
    pub first: usize,
    /// Linear index of `n` in the second-leg box.
    pub second: usize,
    pub coefficient: Complex64,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SchwartzReport {
    pub alpha1: f64,
    pub alpha2: f64,
    pub s0: f64,
    /// `‖h‖_{H^{α₁+s₀, α₂+s₀}}`.
    pub sobolev_norm: f64,
    pub worst_ratio: f64,
    pub worst_index: (MultiIndex, MultiIndex),
    pub entries: Vec<SchwartzEntry>,
}

impl SchwartzReport {
    /// True when every `|b_{m,n}| / bound ≤ 1 + slack`.
    pub fn holds(&self, slack: f64) -> bool {
        self.worst_ratio <= 1.0 + slack
    }
}

/// Kernel of `J^{-α₂}`: `k₂ = Σ_n (1+|n|²)^{-α₂/2} U^n ⊗ (U^n)*`.
///
/// With `(U^n)* = conj(σ(n,-n)) U^{-n}` the only nonzero coefficients are
/// `c_{n,-n} = (1+|n|²)^{-α₂/2} conj(σ(n,-n))`.
pub fn bessel_kernel(alpha2: f64, lattice: LatticeBox, theta: ReducedTheta) -> Result<NCKernel> {
    let mut k = NCKernel::zero(theta, lattice)?;
    let side = lattice.cardinality();
    let d = lattice.dim();
    let table = lattice.coordinate_table();
    for (i, n) in table.chunks_exact(d).enumerate() {
        let w = bessel_weight(norm_sq(n), -alpha2);
        k.coeffs[i * side + lattice.reflected(i)] = k.theta.self_phase(n).conj() * w;
    }
    Ok(k)
}

/// Seeded kernel with envelope `(1+|m|²)^{-s₁/2} (1+|n|²)^{-s₂/2}` and
/// i.i.d. uniform phases.
///
/// Phases come from ChaCha8 seeded by `seed`, with stream and word position
/// keyed by the lattice coordinates of `m` and `n` (zigzag-packed, `64 / d`
/// bits per coordinate). Keys do not depend on the box, so a kernel on a
/// smaller box is exactly the restriction of one on a larger box.
pub fn random_kernel(
    theta: ReducedTheta,
    lattice: LatticeBox,
    s1: f64,
    s2: f64,
    seed: u64,
) -> Result<NCKernel> {
    check_nonnegative("s1", s1)?;
    check_nonnegative("s2", s2)?;
    if lattice.dim() != theta.dim() {
        return Err(Error::DimensionMismatch {
            expected: theta.dim(),
            found: lattice.dim(),
        });
    }
    let d = lattice.dim();
    let bits = 64 / d as u32;
    if bits == 0 || (bits < 64 && u64::from(lattice.radius()) * 2 >= 1u64 << bits) {
        return Err(Error::PhaseKey {
            radius: lattice.radius(),
            dim: d,
        });
    }
    let table = lattice.coordinate_table();
    let keys: Vec<u64> = table.chunks_exact(d).map(|p| phase_key(p, bits)).collect();
    let rows = leg_weights(lattice, -s1);
    let cols = leg_weights(lattice, -s2);
    let base = ChaCha8Rng::seed_from_u64(seed);
    let side = lattice.cardinality();
    let mut coeffs = Vec::with_capacity(side * side);
    for i in 0..side {
        let mut rng = base.clone();
        rng.set_stream(keys[i]);
        for j in 0..side {
            rng.set_word_pos(u128::from(keys[j]) << 1);
            let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            let (s, c) = libm::sincos(TAU * u);
            coeffs.push(Complex64::new(c, s) * (rows[i] * cols[j]));
        }
    }
    NCKernel::from_coeffs(theta, lattice, lattice, coeffs)
}

fn phase_key(p: &[i64], bits: u32) -> u64 {
    p.iter().enumerate().fold(0u64, |acc, (k, &c)| {
        let zigzag = ((c << 1) ^ (c >> 63)) as u64;
        acc | zigzag.checked_shl(k as u32 * bits).unwrap_or(0)
    })
}

fn leg_weights(lattice: LatticeBox, alpha: f64) -> Vec<f64> {
    let d = lattice.dim();
    lattice
        .coordinate_table()
        .chunks_exact(d)
        .map(|m| bessel_weight(norm_sq(m), alpha))
        .collect()
}

fn leg_log_weights(lattice: LatticeBox) -> Vec<f64> {
    let d = lattice.dim();
    lattice
        .coordinate_table()
        .chunks_exact(d)
        .map(|m| libm::log1p(norm_sq(m) as f64))
        .collect()
}

fn check_nonnegative(what: &'static str, value: f64) -> Result<()> {
    if value >= 0.0 {
        Ok(())
    } else {
        Err(Error::NegativeExponent { what, value })
    }
}
