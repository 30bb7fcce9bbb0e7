use alloc::string::String;
use alloc::vec::Vec;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension {found} is below the minimum of {min}")]
    Dimension { found: usize, min: usize },

    #[error("expected dimension {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("expected {expected} entries, found {found}")]
    Length { expected: usize, found: usize },

    #[error("theta entry ({row}, {col}) is not finite")]
    NonFiniteTheta { row: usize, col: usize },

    #[error(
        "theta is not skew-symmetric at ({row}, {col}): {value} vs mirror {mirror} (tolerance 1e-12)"
    )]
    NotSkewSymmetric {
        row: usize,
        col: usize,
        value: f64,
        mirror: f64,
    },

    #[error("index {index:?} lies outside the lattice box of radius {radius}")]
    OutOfBox { index: Vec<i64>, radius: u32 },

    #[error("operands were built over different theta matrices")]
    ThetaMismatch,

    #[error("derivative direction {j} is outside 1..={dim}")]
    Direction { j: usize, dim: usize },

    #[error("symbol `{name}` is not finite at {index:?}")]
    Symbol { name: String, index: Vec<i64> },

    #[error("{what} must be nonnegative, got {value}")]
    NegativeExponent { what: &'static str, value: f64 },

    #[error("kernel legs live on different boxes (radius {rows} vs {cols})")]
    AsymmetricKernel { rows: u32, cols: u32 },

    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFiniteEntry { row: usize, col: usize },

    #[error("shape mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    Shape {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("Schatten exponent must be positive, got {0}")]
    Exponent(f64),

    #[error("invalid fit window [{k_min}, {k_max}] for a spectrum of length {len}")]
    Window {
        k_min: usize,
        k_max: usize,
        len: usize,
    },

    #[error("singular value {k} inside the fit window is zero")]
    ZeroInWindow { k: usize },

    #[error("summability order s0 = {s0} must exceed the dimension {dim}")]
    SummabilityOrder { s0: f64, dim: usize },

    #[error(
        "lattice radius {radius} is too large for deterministic phase keys in dimension {dim}"
    )]
    PhaseKey { radius: u32, dim: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
