//! Deformation matrices and the bicharacter `σ(m, n) = exp(2πi mᵀθ̃n)`.

use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::MultiIndex;

/// Absolute tolerance for `|θ_jk + θ_kj|` and the diagonal.
pub const SKEW_TOLERANCE: f64 = 1e-12;

/// A real skew-symmetric `d × d` matrix, `d ≥ 2`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl ThetaMatrix {
    /// Validates `entries` (row-major, `dim * dim` values).
    pub fn new(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Dimension { found: dim, min: 2 });
        }
        if entries.len() != dim * dim {
            return Err(Error::Length {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        for row in 0..dim {
            for col in 0..dim {
                let v = entries[row * dim + col];
                if !v.is_finite() {
                    return Err(Error::NonFiniteTheta { row, col });
                }
            }
        }
        for row in 0..dim {
            for col in row..dim {
                let value = entries[row * dim + col];
                let mirror = entries[col * dim + row];
                let defect = if row == col { value } else { value + mirror };
                if libm::fabs(defect) > SKEW_TOLERANCE {
                    return Err(Error::NotSkewSymmetric {
                        row,
                        col,
                        value,
                        mirror,
                    });
                }
            }
        }
        Ok(Self { dim, entries })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for r in rows {
            let r = r.as_ref();
            if r.len() != dim {
                return Err(Error::Length {
                    expected: dim,
                    found: r.len(),
                });
            }
            entries.extend_from_slice(r);
        }
        Self::new(dim, entries)
    }

    /// The commutative torus.
    pub fn zero(dim: usize) -> Result<Self> {
        Self::new(dim, alloc::vec![0.0; dim * dim])
    }

    /// The 2-dimensional matrix with `θ_21 = theta21`, `θ_12 = -theta21`.
    pub fn planar(theta21: f64) -> Result<Self> {
        Self::new(2, alloc::vec![0.0, -theta21, theta21, 0.0])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry `θ_{row,col}`, zero-based.
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim + col]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.dim).map(|r| r.to_vec()).collect()
    }

    pub fn negated(&self) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|v| -v).collect(),
        }
    }

    /// Keeps the strictly lower-triangular part.
    pub fn reduce(&self) -> ReducedTheta {
        let d = self.dim;
        let mut entries = alloc::vec![0.0; d * d];
        for row in 1..d {
            for col in 0..row {
                entries[row * d + col] = self.entries[row * d + col];
            }
        }
        ReducedTheta { dim: d, entries }
    }
}

/// Strictly lower-triangular reduction θ̃ of a [`ThetaMatrix`]; this is the
/// data of the cocycle σ.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedTheta {
    dim: usize,
    entries: Vec<f64>,
}

impl ReducedTheta {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.dim + col]
    }

    /// `mᵀθ̃n` reduced into `[-1/2, 1/2]`.
    ///
    /// Each term is reduced mod 1 before summation so large indices keep
    /// full phase accuracy.
    #[inline]
    pub fn phase(&self, m: &[i64], n: &[i64]) -> f64 {
        let d = self.dim;
        let mut t = 0.0;
        for (row, &mr) in m.iter().enumerate().take(d).skip(1) {
            if mr == 0 {
                continue;
            }
            for (col, &nc) in n.iter().enumerate().take(row) {
                let prod = mr * nc;
                if prod != 0 {
                    let term = prod as f64 * self.entries[row * d + col];
                    t += term - libm::round(term);
                }
            }
        }
        t - libm::round(t)
    }

    /// `σ(m, n)` on raw coordinate slices; lengths are not checked.
    #[inline]
    pub fn sigma_raw(&self, m: &[i64], n: &[i64]) -> Complex64 {
        let t = self.phase(m, n);
        if t == 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        let (s, c) = libm::sincos(TAU * t);
        Complex64::new(c, s)
    }

    /// `σ(m, n) = exp(2πi mᵀθ̃n)`.
    pub fn sigma(&self, m: &MultiIndex, n: &MultiIndex) -> Result<Complex64> {
        for x in [m, n] {
            if x.dim() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: x.dim(),
                });
            }
        }
        Ok(self.sigma_raw(m.entries(), n.entries()))
    }

    /// `σ(m, -m)`, the phase relating `(U^m)*` to `U^{-m}`.
    #[inline]
    pub fn self_phase(&self, m: &[i64]) -> Complex64 {
        // mᵀθ̃(-m) = -(mᵀθ̃m)
        let t = -self.phase(m, m);
        if t == 0.0 {
            return Complex64::new(1.0, 0.0);
        }
        let (s, c) = libm::sincos(TAU * t);
        Complex64::new(c, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn quarter() -> ReducedTheta {
        ThetaMatrix::planar(0.25).unwrap().reduce()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn reduce_examples() {
        let r = quarter();
        assert_eq!(r.get(1, 0), 0.25);
        assert_eq!(r.get(0, 1), 0.0);
        assert_eq!(r.get(0, 0), 0.0);

        let z = ThetaMatrix::zero(3).unwrap().reduce();
        assert!((0..3).all(|i| (0..3).all(|j| z.get(i, j) == 0.0)));

        let (a, b, c) = (0.1, 0.2, 0.3);
        let t = ThetaMatrix::from_rows(&[[0.0, -a, -b], [a, 0.0, -c], [b, c, 0.0]]).unwrap();
        let r = t.reduce();
        let nonzero: Vec<_> = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .filter(|&(i, j)| r.get(i, j) != 0.0)
            .collect();
        assert_eq!(nonzero, alloc::vec![(1, 0), (2, 0), (2, 1)]);
        assert_eq!((r.get(1, 0), r.get(2, 0), r.get(2, 1)), (a, b, c));
    }

    #[test]
    fn validation_cites_offending_entry() {
        let err = ThetaMatrix::from_rows(&[[0.0, 0.3], [0.2, 0.0]]).unwrap_err();
        assert!(matches!(
            err,
            Error::NotSkewSymmetric { row: 0, col: 1, .. }
        ));
        let err = ThetaMatrix::from_rows(&[[1e-9, 0.0], [0.0, 0.0]]).unwrap_err();
        assert!(matches!(
            err,
            Error::NotSkewSymmetric { row: 0, col: 0, .. }
        ));
        assert!(ThetaMatrix::from_rows(&[[0.0]]).is_err());
        assert!(ThetaMatrix::from_rows(&[[0.0, f64::NAN], [0.0, 0.0]]).is_err());
        // within tolerance
        assert!(ThetaMatrix::from_rows(&[[0.0, -0.3], [0.3 + 5e-13, 0.0]]).is_ok());
    }

    #[test]
    fn sigma_examples() {
        let r = quarter();
        let m = MultiIndex::from([0, 1]);
        let n = MultiIndex::from([1, 0]);
        assert!(close(r.sigma(&m, &n).unwrap(), Complex64::i(), 1e-15));
        assert_eq!(r.sigma(&n, &m).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(
            r.sigma(&MultiIndex::from([7, -3]), &MultiIndex::zero(2))
                .unwrap(),
            Complex64::new(1.0, 0.0)
        );
        assert!(r.sigma(&MultiIndex::from([1, 0, 0]), &n).is_err());
    }

    #[test]
    fn large_indices_keep_phase_accuracy() {
        // θ = 1/3: m_2 n_1 = 3e9 is an integer multiple of 3, phase must be 1.
        let r = ThetaMatrix::planar(1.0 / 3.0).unwrap().reduce();
        let s = r.sigma_raw(&[0, 3_000_000], &[1000, 0]);
        assert!(close(s, Complex64::new(1.0, 0.0), 1e-6));
    }

    fn random_theta<R: Rng>(rng: &mut R, d: usize) -> ReducedTheta {
        let mut e = alloc::vec![0.0; d * d];
        for i in 0..d {
            for j in 0..i {
                let v: f64 = rng.gen_range(-1.0..1.0);
                e[i * d + j] = v;
                e[j * d + i] = -v;
            }
        }
        ThetaMatrix::new(d, e).unwrap().reduce()
    }

    fn random_index<R: Rng>(rng: &mut R, d: usize) -> Vec<i64> {
        (0..d).map(|_| rng.gen_range(-6..=6)).collect()
    }

    fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    #[test]
    fn unimodular_bicharacter_and_cocycle() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..200 {
            let d = rng.gen_range(2..=4);
            let t = random_theta(&mut rng, d);
            let (m, m2, n, p) = (
                random_index(&mut rng, d),
                random_index(&mut rng, d),
                random_index(&mut rng, d),
                random_index(&mut rng, d),
            );
            let s = |a: &[i64], b: &[i64]| t.sigma_raw(a, b);
            assert!((s(&m, &n).norm() - 1.0).abs() <= 1e-14);
            assert!(close(s(&add(&m, &m2), &n), s(&m, &n) * s(&m2, &n), 1e-12));
            assert!(close(s(&m, &add(&n, &p)), s(&m, &n) * s(&m, &p), 1e-12));
            assert!(close(
                s(&m, &n) * s(&add(&m, &n), &p),
                s(&n, &p) * s(&m, &add(&n, &p)),
                1e-12
            ));
        }
    }
}
