#![allow(dead_code)]

use nctorus_core::{
    Complex64, DenseMatrix, LatticeBox, NCKernel, ReducedTheta, ThetaMatrix, TorusElement,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
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

pub fn random_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_element(rng: &mut impl Rng, theta: &ReducedTheta, n: u32) -> TorusElement {
    let b = LatticeBox::new(theta.dim(), n).unwrap();
    let coeffs = (0..b.cardinality()).map(|_| random_complex(rng)).collect();
    TorusElement::from_coeffs(theta.clone(), b, coeffs).unwrap()
}

pub fn random_kernel(rng: &mut impl Rng, theta: &ReducedTheta, n: u32) -> NCKernel {
    let b = LatticeBox::new(theta.dim(), n).unwrap();
    let side = b.cardinality();
    let coeffs = (0..side * side).map(|_| random_complex(rng)).collect();
    NCKernel::from_coeffs(theta.clone(), b, b, coeffs).unwrap()
}

pub fn random_matrix(rng: &mut impl Rng, n: usize) -> DenseMatrix {
    DenseMatrix::from_fn(n, n, |_, _| random_complex(rng))
}

/// `‖a - b‖_∞ / max(1, ‖b‖_∞)` over coefficients.
pub fn rel(a: &TorusElement, b: &TorusElement) -> f64 {
    let scale = b.coeffs().iter().map(|z| z.norm()).fold(1.0, f64::max);
    a.max_abs_diff(b).unwrap() / scale
}

/// Drops the last CSV column.
pub fn without_last_column(csv: &str) -> String {
    csv.lines()
        .map(|l| l.rsplit_once(',').map_or(l, |(head, _)| head))
        .collect::<Vec<_>>()
        .join("\n")
}
