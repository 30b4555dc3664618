use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A configured limit (maximum degree, maximum dimension) was exceeded.
    #[error("configuration error: {0}")]
    Config(String),

    /// An argument was outside the documented domain of an operation.
    #[error("argument error: {0}")]
    Argument(String),

    /// The two construction routes of the generating matrix disagree.
    #[error(
        "route disagreement at entry ({j}, {k}): quadrature {quadrature:e}, \
         hypergeometric {hypergeometric:e}"
    )]
    RouteDisagreement {
        j: usize,
        k: usize,
        quadrature: f64,
        hypergeometric: f64,
    },

    /// An iterative numerical method failed.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// A documented invariant of a computed object does not hold.
    #[error("invariant violation: {0}")]
    Invariant(String),

    /// Requested combination lies outside what is implemented.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An exhaustive computation would exceed its budget.
    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable tag used by the command-line error report.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Config(_) => "config",
            Error::Argument(_) => "argument",
            Error::RouteDisagreement { .. } => "route_disagreement",
            Error::Numerical(_) => "numerical",
            Error::Invariant(_) => "invariant",
            Error::Unsupported(_) => "unsupported",
            Error::Budget(_) => "budget",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
