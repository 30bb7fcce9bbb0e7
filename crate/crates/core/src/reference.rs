//! Definitional, slow reference paths used to cross-check the production
//! formulas.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::algebra::TorusElement;
use crate::error::{Error, Result};
use crate::kernels::{op_multiply, NCKernel};

/// `(id ⊗ τ)(k (1 ⊗ x))` computed literally.
///
/// For each first-leg index `m` the second leg `b_m = Σ_n c_{m,n} U^n` is
/// multiplied by `x` in the opposite algebra and traced.
pub fn apply_kernel_by_partial_trace(k: &NCKernel, x: &TorusElement) -> Result<TorusElement> {
    if k.theta() != x.theta() {
        return Err(Error::ThetaMismatch);
    }
    let second = k.second_lattice();
    let cols = second.cardinality();
    let out: Vec<Complex64> = k
        .coeffs()
        .chunks_exact(cols)
        .map(|row| {
            let leg = TorusElement::from_coeffs(k.theta().clone(), second, row.to_vec())?;
            Ok(op_multiply(&leg, x)?.trace())
        })
        .collect::<Result<_>>()?;
    TorusElement::from_coeffs(k.theta().clone(), k.first_lattice(), out)
}

/// The isomorphism `(T_θ)^op → T_{-θ}` on coefficients.
///
/// Reading `a ⋆ b = b a` as a twisted product of `a` and `b` gives the
/// cocycle `σ(y, x)`, which differs from the lower-triangular cocycle of
/// `-θ` by the coboundary of `β(m) = σ(m, m)`. Hence
/// `x̂(m) ↦ conj(σ(m, m)) x̂(m)` intertwines `⋆` with `∗_{σ_{-θ}}`.
/// The returned element carries the reduction of `-θ`, passed in as `negated`.
pub fn opposite_gauge(
    x: &TorusElement,
    negated: &crate::cocycle::ReducedTheta,
) -> Result<TorusElement> {
    let theta = x.theta();
    let out = x.map_coeffs(|m, v| theta.sigma_raw(m, m).conj() * v);
    TorusElement::from_coeffs(negated.clone(), x.lattice(), out.into_coeffs())
}
