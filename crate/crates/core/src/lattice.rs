//! Truncated integer lattices `Z^d ∩ [-N, N]^d`.
//!
//! Every matrix and coefficient array in the crate is laid out in the
//! lexicographic order of [`LatticeBox::enumerate`]: the first coordinate is
//! the most significant, so a 2-dimensional box of radius 1 runs
//! `(-1,-1), (-1,0), (-1,1), (0,-1), …, (1,1)`.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};

/// A point of `Z^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<i64>);

impl MultiIndex {
    pub fn new(entries: Vec<i64>) -> Self {
        Self(entries)
    }

    pub fn zero(dim: usize) -> Self {
        Self(alloc::vec![0; dim])
    }

    /// The standard basis vector `e_j`, zero-based.
    pub fn unit(dim: usize, j: usize) -> Self {
        let mut e = alloc::vec![0; dim];
        e[j] = 1;
        Self(e)
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// `|m|^2 = Σ m_j^2`.
    pub fn norm_sq(&self) -> i64 {
        norm_sq(&self.0)
    }

    /// Largest absolute coordinate, i.e. the radius of the smallest box holding `self`.
    pub fn sup_norm(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).max().unwrap_or(0)
    }
}

impl From<Vec<i64>> for MultiIndex {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl<const D: usize> From<[i64; D]> for MultiIndex {
    fn from(v: [i64; D]) -> Self {
        Self(v.to_vec())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl Neg for &MultiIndex {
    type Output = MultiIndex;
    fn neg(self) -> MultiIndex {
        MultiIndex(self.0.iter().map(|c| -c).collect())
    }
}

impl Add for &MultiIndex {
    type Output = MultiIndex;
    fn add(self, rhs: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.dim(), rhs.dim());
        MultiIndex(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &MultiIndex {
    type Output = MultiIndex;
    fn sub(self, rhs: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.dim(), rhs.dim());
        MultiIndex(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

/// `Σ m_j^2` over a raw coordinate slice.
pub fn norm_sq(m: &[i64]) -> i64 {
    m.iter().map(|c| c * c).sum()
}

/// The symmetric box `Z^d ∩ [-N, N]^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LatticeBox {
    dim: usize,
    radius: u32,
}

impl LatticeBox {
    pub fn new(dim: usize, radius: u32) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension { found: 0, min: 1 });
        }
        Ok(Self { dim, radius })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    /// Points per axis, `2N + 1`.
    pub fn side(&self) -> usize {
        2 * self.radius as usize + 1
    }

    /// `(2N + 1)^d`.
    pub fn cardinality(&self) -> usize {
        self.side().pow(self.dim as u32)
    }

    /// The box holding every sum `a + b` with `a ∈ self`, `b ∈ other`.
    pub fn minkowski_sum(&self, other: &LatticeBox) -> LatticeBox {
        debug_assert_eq!(self.dim, other.dim);
        LatticeBox {
            dim: self.dim,
            radius: self.radius + other.radius,
        }
    }

    pub fn contains(&self, m: &MultiIndex) -> bool {
        self.contains_coords(m.entries())
    }

    pub fn contains_coords(&self, m: &[i64]) -> bool {
        let r = i64::from(self.radius);
        m.len() == self.dim && m.iter().all(|c| (-r..=r).contains(c))
    }

    /// All points in canonical lexicographic order.
    pub fn enumerate(&self) -> Vec<MultiIndex> {
        (0..self.cardinality()).map(|i| self.point(i)).collect()
    }

    /// Position of `m` in [`enumerate`](Self::enumerate).
    pub fn linear_index(&self, m: &MultiIndex) -> Result<usize> {
        if m.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: m.dim(),
            });
        }
        self.index_of(m.entries()).ok_or_else(|| Error::OutOfBox {
            index: m.entries().to_vec(),
            radius: self.radius,
        })
    }

    /// Like [`linear_index`](Self::linear_index) on a raw slice; `None` when outside.
    #[inline]
    pub fn index_of(&self, m: &[i64]) -> Option<usize> {
        if m.len() != self.dim {
            return None;
        }
        let r = i64::from(self.radius);
        let side = self.side();
        let mut idx = 0usize;
        for &c in m {
            if c < -r || c > r {
                return None;
            }
            idx = idx * side + (c + r) as usize;
        }
        Some(idx)
    }

    /// Inverse of [`linear_index`](Self::linear_index).
    ///
    /// Panics if `idx >= self.cardinality()`.
    pub fn point(&self, idx: usize) -> MultiIndex {
        let mut out = alloc::vec![0; self.dim];
        self.write_point(idx, &mut out);
        MultiIndex(out)
    }

    pub(crate) fn write_point(&self, mut idx: usize, out: &mut [i64]) {
        assert!(idx < self.cardinality(), "linear index out of range");
        let side = self.side();
        let r = i64::from(self.radius);
        for slot in out.iter_mut().rev() {
            *slot = (idx % side) as i64 - r;
            idx /= side;
        }
    }

    /// Coordinates of every point, flattened: point `i` occupies `[i*d, (i+1)*d)`.
    pub(crate) fn coordinate_table(&self) -> Vec<i64> {
        let d = self.dim;
        let mut table = alloc::vec![0; self.cardinality() * d];
        for (i, chunk) in table.chunks_exact_mut(d).enumerate() {
            self.write_point(i, chunk);
        }
        table
    }

    /// Index of `-m` for the point with index `idx`; symmetric boxes reflect onto themselves.
    #[inline]
    pub fn reflected(&self, idx: usize) -> usize {
        self.cardinality() - 1 - idx
    }
}
