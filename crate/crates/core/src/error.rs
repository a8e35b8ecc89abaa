use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {d}: need d >= 2")]
    InvalidDimension { d: usize },

    #[error("invalid index: {0}")]
    InvalidIndex(String),

    #[error("shape mismatch: expected {expected}x{expected}, found {rows}x{cols}")]
    DimensionMismatch { expected: usize, rows: usize, cols: usize },

    #[error("degenerate state: coefficient matrix has zero norm")]
    DegenerateState,

    #[error("degenerate outcome: every projected amplitude vanishes")]
    DegenerateOutcome,

    #[error("degenerate tensor: correlation tensor is zero")]
    DegenerateTensor,

    #[error("input not normalized (norm^2 = {norm_sq})")]
    Normalization { norm_sq: f64 },

    #[error("identity violation in {matrix}: max abs error {max_abs_error:e}")]
    IdentityViolation { matrix: String, max_abs_error: f64 },

    #[error("value out of representable range: {0}")]
    Range(String),

    #[error("scale limit exceeded: {0}")]
    ScaleLimit(String),

    #[error("truncation tail {tail:e} exceeds bound {bound:e}")]
    Truncation { tail: f64, bound: f64 },

    #[error("unsupported reference: {0}")]
    UnsupportedReference(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
