use thiserror::Error;

/// Errors raised by the analytic, simulation and optimization routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the routine.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative evaluation did not converge within its iteration cap.
    #[error("{routine} did not converge after {iterations} iterations")]
    NonConvergence {
        routine: &'static str,
        iterations: usize,
    },

    /// The alternating outer sum cancelled to a level that cannot be trusted.
    #[error("cancellation alarm: result {value:e} against largest term {max_term:e}")]
    Cancellation { value: f64, max_term: f64 },

    /// The coarse grid minimum sat on the edge of the search bracket.
    #[error(
        "coarse minimum at w = {w_edge} lies on the bracket edge [{w_min}, {w_max}]; widen the bracket"
    )]
    BracketEdge { w_edge: f64, w_min: f64, w_max: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures of the numerical machinery (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NonConvergence { .. } | Error::Cancellation { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
