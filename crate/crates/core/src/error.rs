use thiserror::Error;

/// Errors raised by the simulation, estimation and oracle layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Cholesky factorization failed for every jitter level on the ladder.
    #[error("numerical failure: {message} (last jitter {last_jitter:e}, pivot {pivot:?})")]
    NumericalFailure {
        message: String,
        last_jitter: f64,
        pivot: Option<usize>,
    },

    /// The variance estimate is zero after clamping, so the statistic is undefined.
    #[error("degenerate variance estimate (unclamped value {unclamped:e}); test undecidable")]
    DegenerateVariance { unclamped: f64 },

    #[error("refused: {0}")]
    Refused(String),

    #[error("size guard: {0}")]
    SizeGuard(String),

    #[error("quadrature did not converge: {0}")]
    QuadratureFailure(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidArgument(_) | Error::Refused(_) | Error::SizeGuard(_) => 2,
            Error::NumericalFailure { .. } | Error::DegenerateVariance { .. } | Error::QuadratureFailure(_) => 3,
            Error::Io { .. } => 4,
        }
    }
}
