#![allow(dead_code)]

use nctorus_core::{Complex64, LatticeBox, NCKernel, ReducedTheta, ThetaMatrix, TorusElement};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn lattice(d: usize, n: u32) -> LatticeBox {
    LatticeBox::new(d, n).unwrap()
}

pub fn random_theta_matrix(rng: &mut impl Rng, d: usize) -> ThetaMatrix {
    let mut e = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..i {
            let v: f64 = rng.gen_range(-1.0..1.0);
            e[i * d + j] = v;
            e[j * d + i] = -v;
        }
    }
    ThetaMatrix::new(d, e).unwrap()
}

pub fn random_theta(rng: &mut impl Rng, d: usize) -> ReducedTheta {
    random_theta_matrix(rng, d).reduce()
}

pub fn random_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_element(rng: &mut impl Rng, theta: &ReducedTheta, n: u32) -> TorusElement {
    let b = lattice(theta.dim(), n);
    let coeffs = (0..b.cardinality()).map(|_| random_complex(rng)).collect();
    TorusElement::from_coeffs(theta.clone(), b, coeffs).unwrap()
}

/// Kernel with i.i.d. coefficients on `box × box`.
pub fn random_dense_kernel(rng: &mut impl Rng, theta: &ReducedTheta, n: u32) -> NCKernel {
    let b = lattice(theta.dim(), n);
    let side = b.cardinality();
    let coeffs = (0..side * side).map(|_| random_complex(rng)).collect();
    NCKernel::from_coeffs(theta.clone(), b, b, coeffs).unwrap()
}

/// Largest coefficient modulus over the union of supports.
pub fn scale(x: &TorusElement) -> f64 {
    x.coeffs().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Householder reflection `I - 2vv*/|v|²` for a random `v`.
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> nctorus_core::DenseMatrix {
    let v: Vec<Complex64> = (0..n).map(|_| random_complex(rng)).collect();
    let nsq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    nctorus_core::DenseMatrix::from_fn(n, n, |i, j| {
        let id = if i == j { 1.0 } else { 0.0 };
        Complex64::new(id, 0.0) - v[i] * v[j].conj() * (2.0 / nsq)
    })
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> nctorus_core::DenseMatrix {
    nctorus_core::DenseMatrix::from_fn(rows, cols, |_, _| random_complex(rng))
}
