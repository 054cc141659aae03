use thiserror::Error;

/// Errors produced by the library.
///
/// The CLI maps these onto exit codes through [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("bilinear form is degenerate (smallest singular value {smallest:.3e})")]
    DegenerateForm { smallest: f64 },

    #[error("matrix is not symmetric (asymmetry {residual:.3e})")]
    NotSymmetric { residual: f64 },

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("bracket record ({i}, {j}) is invalid: {reason}")]
    BadBracket { i: usize, j: usize, reason: String },

    #[error("Jacobi identity fails (residual {residual:.3e})")]
    JacobiFailure { residual: f64 },

    #[error("invalid double extension data: {condition} (residual {residual:.3e})")]
    InvalidSpec { condition: &'static str, residual: f64 },

    #[error("base metric Lie algebra is not Einstein (residual {residual:.3e})")]
    NotEinstein { residual: f64 },

    #[error("mu must be nonzero")]
    ZeroMu,

    #[error("cocycle condition fails (residual {residual:.3e})")]
    CocycleFailure { residual: f64 },

    #[error("cyclicity condition fails (residual {residual:.3e})")]
    CyclicityFailure { residual: f64 },

    #[error("derivations do not commute (residual {residual:.3e})")]
    NonCommuting { residual: f64 },

    #[error("Ricci operator is not of type I")]
    NotTypeI,

    #[error("Ricci operator is not of type II")]
    NotTypeII,

    #[error("expected Lorentz signature (1, n-1), found ({p}, {q})")]
    WrongSignature { p: usize, q: usize },

    #[error("image of the Ricci operator is not null (<v,v> = {norm:.3e})")]
    NullImageNotNull { norm: f64 },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("bracket structure does not fit a double extension: {what} (residual {residual:.3e})")]
    StructureMismatch { what: &'static str, residual: f64 },

    #[error("verification failed: {0}")]
    VerificationFailure(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownName(String),

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// 2 for malformed or invalid input, 3 for a failed mathematical
    /// precondition, 4 when a verification contradicts an expected identity.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_)
            | Error::Validation(_)
            | Error::Io(_)
            | Error::DimensionMismatch { .. }
            | Error::DegenerateForm { .. }
            | Error::NotSymmetric { .. }
            | Error::NonFinite(_)
            | Error::BadBracket { .. }
            | Error::JacobiFailure { .. }
            | Error::UnknownName(_)
            | Error::BadParams(_) => 2,
            Error::InvalidSpec { .. }
            | Error::NotEinstein { .. }
            | Error::ZeroMu
            | Error::CocycleFailure { .. }
            | Error::CyclicityFailure { .. }
            | Error::NonCommuting { .. }
            | Error::NotTypeI
            | Error::NotTypeII
            | Error::WrongSignature { .. }
            | Error::PreconditionFailed(_) => 3,
            Error::NullImageNotNull { .. }
            | Error::StructureMismatch { .. }
            | Error::VerificationFailure(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
