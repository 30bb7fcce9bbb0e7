//! Quantum tori `T_θ^d` at finite Fourier truncation.
//!
//! Elements, Fourier multipliers and noncommutative integral kernels are
//! represented by their coefficients over symmetric lattice boxes; operators
//! become dense matrices whose singular values give Schatten and weak
//! Schatten (quasi)norms.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod cocycle;
pub mod error;
pub mod kernels;
pub mod lattice;
pub mod matrix;
pub mod multipliers;
pub mod reference;
pub mod schatten;

pub use num_complex::Complex64;

pub use crate::algebra::TorusElement;
pub use crate::cocycle::{ReducedTheta, ThetaMatrix};
pub use crate::error::{Error, Result};
pub use crate::kernels::{bessel_kernel, op_multiply, random_kernel, NCKernel, SchwartzReport};
pub use crate::lattice::{LatticeBox, MultiIndex};
pub use crate::matrix::{DenseMatrix, OperatorMatrix};
pub use crate::multipliers::{apply_multiplier, multiplier_matrix, sobolev_norm, Symbol};
pub use crate::schatten::{critical_exponent, singular_values, DecayFit, SingularSpectrum};
