use thiserror::Error;

pub type Result<T> = std::result::Result<T, PtmError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PtmError {
    #[error("capacity exceeded for {what}: requested {requested}, limit {limit}")]
    Capacity {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("step-size control failed at t = {t}: local error {error:e} after {halvings} halvings")]
    StepSize { t: f64, error: f64, halvings: u32 },

    #[error("malformed circuit: {0}")]
    MalformedCircuit(String),
}

impl PtmError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        PtmError::InvalidArgument(msg.into())
    }
}
