use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("entry ({row}, {col}) has modulus {modulus}, expected 1")]
    NotUnimodular {
        row: usize,
        col: usize,
        modulus: f64,
    },

    #[error("matrix `{0}` is not a complex Hadamard matrix")]
    NotHadamard(String),

    #[error("singular Möbius transform at z = {z}")]
    SingularTransform { z: Complex64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("z4 cross-check residual {residual:e} exceeds {tolerance:e}")]
    ConsistencyViolation { residual: f64, tolerance: f64 },

    #[error("assembled matrix violates K K^† = 6 I by {residual:e}")]
    ConstructionInvariant { residual: f64 },

    #[error("empty matrix set")]
    EmptySet,

    #[error("internal consistency: {0}")]
    Internal(String),

    #[error("orbit {rep:?} lies outside the exponent space (l1 = {l1} > l = {l})")]
    OutsideSpace { rep: Vec<i32>, l1: u32, l: u32 },

    #[error("floating-point simplex lost accuracy ({0}); retry with Dantzig pricing or exact arithmetic")]
    Numerical(String),

    #[error("invalid model: {0}")]
    Model(String),

    #[error("MPS parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
