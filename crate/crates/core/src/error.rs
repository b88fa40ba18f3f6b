use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("pole of {function} at {at}")]
    Pole { function: &'static str, at: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("outside the absolute-convergence region: {0}")]
    ConvergenceRegion(String),

    #[error("tail not converged: bound {bound:e} exceeds {tolerance:e}")]
    TailNotConverged { bound: f64, tolerance: f64 },

    #[error("sieve limit {limit} does not cover {needed}")]
    SieveLimit { needed: u64, limit: u64 },

    #[error("input too large: {0}")]
    TooLarge(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("|alpha| = {0:e} is too small for the split main term; use the alpha = 0 path")]
    AlphaTooSmall(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
