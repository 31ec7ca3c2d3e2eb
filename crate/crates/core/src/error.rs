use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what}: argument {value} is outside the domain ({expected})")]
    Domain {
        what: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("bessel_k: order {0} is not supported (expected 0, 1 or 2)")]
    UnsupportedOrder(i32),

    /// An iterative or adaptive routine ran out of budget. `estimate` is the
    /// best value reached so far.
    #[error(
        "{what} did not converge: estimate {estimate} with error {error:e} \
         exceeds tolerance {tolerance:e}"
    )]
    NonConvergence {
        what: &'static str,
        estimate: f64,
        error: f64,
        tolerance: f64,
    },

    #[error("{what} diverges: {reason}")]
    Divergence { what: &'static str, reason: &'static str },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64, expected: &'static str) -> Self {
        Error::Domain { what, value, expected }
    }

    /// True for failures of a numerical method, as opposed to bad arguments.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NonConvergence { .. })
    }
}
