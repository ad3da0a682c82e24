//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse error class, used by callers (e.g. the CLI) to map failures to
/// distinct exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Input bytes do not match the declared format.
    Parse,
    /// Well-formed input that violates a domain invariant, or a statistic
    /// that is undefined on the given sample.
    Data,
    /// Invalid configuration or unusable option combination.
    Config,
    /// Operating-system level I/O failure.
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed row in an input file, with its 1-based line number.
    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    /// Domain-invariant violation in otherwise well-formed data.
    #[error("{0}")]
    Data(String),

    /// A statistic is undefined on this sample (all-zero day, collapsed
    /// octiles, empty tail group, ...).
    #[error("degenerate sample: {0}")]
    Degenerate(String),

    /// Session has too few periods for the requested edge trim.
    #[error("session too short: {np} periods, need more than {min_np}")]
    ShortSession { np: usize, min_np: usize },

    /// Day has fewer periods than the uniformization target.
    #[error("insufficient periods: np={np} < target={target}")]
    InsufficientPeriods { np: usize, target: usize },

    /// Error raised while computing one statistic of a composite report.
    #[error("{stat}: {source}")]
    Stat {
        stat: &'static str,
        #[source]
        source: Box<Error>,
    },

    /// Calibration targets outside the reachable set of the model family.
    #[error("no solution: {message} (residual {residual:.3e})")]
    NoSolution { message: String, residual: f64 },

    /// Iterative solver failed to reach tolerance.
    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parse { .. } => ErrorClass::Parse,
            Error::Data(_)
            | Error::Degenerate(_)
            | Error::ShortSession { .. }
            | Error::InsufficientPeriods { .. }
            | Error::NoSolution { .. }
            | Error::NoConvergence { .. } => ErrorClass::Data,
            Error::Stat { source, .. } => source.class(),
            Error::Config(_) => ErrorClass::Config,
            Error::Io(_) => ErrorClass::Io,
        }
    }

    /// Tag an error with the statistic that raised it.
    pub(crate) fn stat(stat: &'static str, source: Error) -> Error {
        Error::Stat {
            stat,
            source: Box::new(source),
        }
    }
}
