//! JSON documents for θ, elements and kernels, and the binary kernel dump.
//!
//! Coefficients are `[re, im]` pairs in canonical lattice order. The binary
//! dump is a 16-byte header (`NCK1`, `d` and `N` as little-endian `u32`,
//! four zero bytes) followed by `side²` little-endian `f64` pairs, row-major.

use std::io::{Read, Write};

use nctorus_core::{Complex64, LatticeBox, NCKernel, ReducedTheta, ThetaMatrix, TorusElement};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const KERNEL_MAGIC: &[u8; 4] = b"NCK1";
pub const HEADER_LEN: usize = 16;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Core(#[from] nctorus_core::Error),
    #[error("theta has {found} rows but d = {d}")]
    RowCount { d: usize, found: usize },
    #[error("theta row {row} has {found} entries but d = {d}")]
    RowLength { row: usize, d: usize, found: usize },
    #[error("theta entry ({row}, {col}) = {value} is not finite")]
    NonFinite { row: usize, col: usize, value: f64 },
    #[error("document is for d = {found}, expected d = {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("value {0} does not fit in 32 bits")]
    TooLarge(usize),
    #[error("bad magic {0:?}, expected \"NCK1\"")]
    Magic([u8; 4]),
    #[error("nonzero reserved header bytes")]
    Reserved,
    #[error("kernel is not square ({rows} x {cols} lattice points)")]
    NotSquare { rows: usize, cols: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ThetaDoc {
    pub d: usize,
    pub theta: Vec<Vec<f64>>,
}

impl ThetaDoc {
    pub fn from_matrix(theta: &ThetaMatrix) -> Self {
        Self {
            d: theta.dim(),
            theta: theta.rows(),
        }
    }

    /// Shape and finiteness checks first, then the skew-symmetry check of
    /// [`ThetaMatrix::new`]; every error names the offending entry.
    pub fn to_matrix(&self) -> Result<ThetaMatrix, FormatError> {
        let d = self.d;
        if self.theta.len() != d {
            return Err(FormatError::RowCount {
                d,
                found: self.theta.len(),
            });
        }
        for (row, r) in self.theta.iter().enumerate() {
            if r.len() != d {
                return Err(FormatError::RowLength {
                    row,
                    d,
                    found: r.len(),
                });
            }
            if let Some(col) = r.iter().position(|v| !v.is_finite()) {
                return Err(FormatError::NonFinite {
                    row,
                    col,
                    value: r[col],
                });
            }
        }
        Ok(ThetaMatrix::from_rows(&self.theta)?)
    }
}

pub fn parse_theta(json: &str) -> Result<ThetaMatrix, FormatError> {
    serde_json::from_str::<ThetaDoc>(json)?.to_matrix()
}

pub fn read_theta(path: &std::path::Path) -> Result<ThetaMatrix, FormatError> {
    parse_theta(&std::fs::read_to_string(path)?)
}

pub fn theta_to_json(theta: &ThetaMatrix) -> String {
    serde_json::to_string_pretty(&ThetaDoc::from_matrix(theta)).expect("plain data serializes")
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ElementDoc {
    pub d: usize,
    #[serde(rename = "N")]
    pub n: u32,
    pub coeffs: Vec<[f64; 2]>,
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn complex(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

fn check_dim(theta: &ReducedTheta, d: usize) -> Result<(), FormatError> {
    if theta.dim() != d {
        return Err(FormatError::Dimension {
            expected: theta.dim(),
            found: d,
        });
    }
    Ok(())
}

impl ElementDoc {
    pub fn from_element(x: &TorusElement) -> Self {
        Self {
            d: x.dim(),
            n: x.lattice().radius(),
            coeffs: x.coeffs().iter().copied().map(pair).collect(),
        }
    }

    pub fn to_element(&self, theta: ReducedTheta) -> Result<TorusElement, FormatError> {
        check_dim(&theta, self.d)?;
        let lattice = LatticeBox::new(self.d, self.n)?;
        let coeffs = self.coeffs.iter().copied().map(complex).collect();
        Ok(TorusElement::from_coeffs(theta, lattice, coeffs)?)
    }
}

pub fn element_to_json(x: &TorusElement) -> String {
    serde_json::to_string(&ElementDoc::from_element(x)).expect("plain data serializes")
}

pub fn element_from_json(json: &str, theta: ReducedTheta) -> Result<TorusElement, FormatError> {
    serde_json::from_str::<ElementDoc>(json)?.to_element(theta)
}

/// `coeffs[i][j]` is `c_{m_i, n_j}` with `m_i`, `n_j` in canonical order.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct KernelDoc {
    pub d: usize,
    #[serde(rename = "N")]
    pub n: u32,
    pub coeffs: Vec<Vec<[f64; 2]>>,
}

impl KernelDoc {
    pub fn from_kernel(k: &NCKernel) -> Result<Self, FormatError> {
        let (a, b) = (k.first_lattice(), k.second_lattice());
        if a != b {
            return Err(FormatError::NotSquare {
                rows: a.cardinality(),
                cols: b.cardinality(),
            });
        }
        Ok(Self {
            d: a.dim(),
            n: a.radius(),
            coeffs: k
                .coeffs()
                .chunks(b.cardinality())
                .map(|row| row.iter().copied().map(pair).collect())
                .collect(),
        })
    }

    pub fn to_kernel(&self, theta: ReducedTheta) -> Result<NCKernel, FormatError> {
        check_dim(&theta, self.d)?;
        let lattice = LatticeBox::new(self.d, self.n)?;
        let side = lattice.cardinality();
        if self.coeffs.len() != side {
            return Err(nctorus_core::Error::Length {
                expected: side,
                found: self.coeffs.len(),
            }
            .into());
        }
        let mut flat = Vec::with_capacity(side * side);
        for row in &self.coeffs {
            if row.len() != side {
                return Err(nctorus_core::Error::Length {
                    expected: side,
                    found: row.len(),
                }
                .into());
            }
            flat.extend(row.iter().copied().map(complex));
        }
        Ok(NCKernel::from_coeffs(theta, lattice, lattice, flat)?)
    }
}

pub fn kernel_to_json(k: &NCKernel) -> Result<String, FormatError> {
    Ok(serde_json::to_string(&KernelDoc::from_kernel(k)?)?)
}

pub fn kernel_from_json(json: &str, theta: ReducedTheta) -> Result<NCKernel, FormatError> {
    serde_json::from_str::<KernelDoc>(json)?.to_kernel(theta)
}

pub fn write_kernel_binary(k: &NCKernel, mut w: impl Write) -> Result<(), FormatError> {
    let lattice = k.first_lattice();
    if lattice != k.second_lattice() {
        return Err(FormatError::NotSquare {
            rows: lattice.cardinality(),
            cols: k.second_lattice().cardinality(),
        });
    }
    let d = u32::try_from(lattice.dim()).map_err(|_| FormatError::TooLarge(lattice.dim()))?;
    let mut header = [0u8; HEADER_LEN];
    header[..4].copy_from_slice(KERNEL_MAGIC);
    header[4..8].copy_from_slice(&d.to_le_bytes());
    header[8..12].copy_from_slice(&lattice.radius().to_le_bytes());
    w.write_all(&header)?;
    let mut buf = Vec::with_capacity(k.coeffs().len() * 16);
    for z in k.coeffs() {
        buf.extend_from_slice(&z.re.to_le_bytes());
        buf.extend_from_slice(&z.im.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_kernel_binary(mut r: impl Read, theta: ReducedTheta) -> Result<NCKernel, FormatError> {
    let mut header = [0u8; HEADER_LEN];
    r.read_exact(&mut header)?;
    let magic: [u8; 4] = header[..4].try_into().unwrap();
    if &magic != KERNEL_MAGIC {
        return Err(FormatError::Magic(magic));
    }
    if header[12..].iter().any(|&b| b != 0) {
        return Err(FormatError::Reserved);
    }
    let d = u32::from_le_bytes(header[4..8].try_into().unwrap()) as usize;
    let n = u32::from_le_bytes(header[8..12].try_into().unwrap());
    check_dim(&theta, d)?;
    let lattice = LatticeBox::new(d, n)?;
    let side = lattice.cardinality();
    let mut bytes = vec![0u8; side * side * 16];
    r.read_exact(&mut bytes)?;
    let coeffs = bytes
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[..8].try_into().unwrap()),
                f64::from_le_bytes(c[8..].try_into().unwrap()),
            )
        })
        .collect();
    Ok(NCKernel::from_coeffs(theta, lattice, lattice, coeffs)?)
}
