use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid density: {0}")]
    InvalidDensity(String),

    #[error("operation `{op}` is not supported for {kind} densities")]
    Unsupported { op: &'static str, kind: &'static str },

    #[error("reciprocal density integral diverges on [{a}, {b}]")]
    Divergent { a: f64, b: f64 },

    #[error("quadrature did not converge on [{a}, {b}] (estimate {estimate}, error {error})")]
    QuadratureFailed {
        a: f64,
        b: f64,
        estimate: f64,
        error: f64,
    },

    #[error("empty dataset: {0}")]
    EmptyDataset(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("non-finite {what} at the starting point")]
    NonFinite { what: &'static str },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for failures caused by the numerics rather than the caller's input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Divergent { .. }
                | Error::QuadratureFailed { .. }
                | Error::NonFinite { .. }
                | Error::Numerical(_)
        )
    }
}
