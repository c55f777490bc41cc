use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violates the documented precondition of an operation.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("curve y^2 = x^3 + {a}x + {b} has bad reduction at p = {p}")]
    BadReduction { a: i64, b: i64, p: u64 },

    #[error("|a1| = {a1} exceeds the Hasse bound 2*sqrt({p})")]
    HasseViolation { a1: i64, p: u64 },

    /// A configured size ceiling (prime size, sequence length) was exceeded.
    #[error("resource ceiling exceeded: {what} = {value} > {ceiling}")]
    Resource {
        what: &'static str,
        value: u64,
        ceiling: u64,
    },

    #[error("root iteration did not converge (best residual {best_residual:e})")]
    NonConvergence { best_residual: f64 },

    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Precondition(_) | Error::BadReduction { .. } | Error::HasseViolation { .. } => 3,
            Error::Resource { .. } => 4,
            Error::NonConvergence { .. } | Error::Numeric(_) => 5,
        }
    }
}
