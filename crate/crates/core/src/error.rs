use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigenvalues not strictly increasing at index {index}")]
    NotStrictlyIncreasing { index: usize },

    #[error("zero eigenvalue at index {index} (zero_mode is disabled)")]
    ZeroEigenvalue { index: usize },

    #[error("level index {index} out of range (spectrum has {len} levels)")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("exact rational evaluation unavailable: {0}")]
    ExactUnavailable(String),

    #[error("wrong builder: {0}")]
    WrongBuilder(String),

    #[error("generator horizon below 2 yields an empty subspace")]
    EmptySubspace,

    #[error("invalid generator coefficient: {0}")]
    InvalidGenerator(String),

    #[error("vector not in the commutator domain: column sum for label {label} is nonzero")]
    NotInCommutatorDomain { label: usize },

    #[error("probe needs more rows than columns (rows {rows}, cols {cols})")]
    InvalidProbeShape { rows: usize, cols: usize },

    #[error("quadrature under-resolved: {nodes} nodes per axis, need at least {required}")]
    QuadratureUnderResolved { nodes: usize, required: usize },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("analytic argmax disagrees with finite scan: analytic {analytic}, scanned {scanned}")]
    ScanDisagreement { analytic: f64, scanned: f64 },

    #[error("config error at {location}: {message}")]
    Config { location: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn config(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            location: location.into(),
            message: message.into(),
        }
    }
}
