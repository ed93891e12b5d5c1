//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid parameters or inconsistent configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// A query point outside the mathematical domain of an operation
    /// (e.g. zero radius in spherical coordinates).
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed input values (NaN coordinates and the like).
    #[error("invalid input: {0}")]
    Input(String),

    /// Two interacting nodes coincide, so the pair force is undefined.
    #[error("degenerate pair: nodes {i} and {j} are at distance zero")]
    DegeneratePair { i: usize, j: usize },

    /// Stencil with duplicate points; the collocation matrix is singular.
    #[error("degenerate stencil: points {i} and {j} coincide")]
    DegenerateStencil { i: usize, j: usize },

    /// Polynomial block is rank deficient, the augmented system has no
    /// unique solution.
    #[error("stencil not unisolvent for degree {degree}: polynomial block rank {rank} < {required}")]
    NonUnisolvent {
        degree: usize,
        rank: usize,
        required: usize,
    },

    /// Linear solve failed or the system is conditioned beyond use.
    #[error("linear solve failed (condition estimate {cond:.3e})")]
    SolverFailure { cond: f64 },

    /// An operation needed more points than were available.
    #[error("not enough points: need at least {needed}, have {have}")]
    ShortCount { needed: usize, have: usize },

    /// Parse failure in one of the file formats.
    #[error("parse error at byte {offset}: {msg}")]
    Parse { offset: u64, msg: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::Domain(_)
            | Error::Input(_)
            | Error::DegeneratePair { .. }
            | Error::DegenerateStencil { .. }
            | Error::NonUnisolvent { .. }
            | Error::SolverFailure { .. }
            | Error::ShortCount { .. } => 3,
            Error::Parse { .. } | Error::Io(_) => 4,
        }
    }

    /// Stable machine-readable kind tag for error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Config(_) => "config",
            Error::Domain(_) => "domain",
            Error::Input(_) => "input",
            Error::DegeneratePair { .. } => "degenerate_pair",
            Error::DegenerateStencil { .. } => "degenerate_stencil",
            Error::NonUnisolvent { .. } => "non_unisolvent",
            Error::SolverFailure { .. } => "solver_failure",
            Error::ShortCount { .. } => "short_count",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
        }
    }
}
