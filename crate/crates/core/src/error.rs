use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed bitstring or matrix text. `line` is 1-indexed when known.
    #[error("format error{}: {message}", line.map(|l| format!(" on line {l}")).unwrap_or_default())]
    Format { line: Option<usize>, message: String },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// Generator rows are linearly dependent or otherwise do not describe a code.
    #[error("invalid code: {0}")]
    InvalidCode(String),

    /// An argument violated an operation's precondition.
    #[error("{0}")]
    Domain(String),

    #[error("{what} out of range: {value} (allowed {allowed})")]
    OutOfRange {
        what: &'static str,
        value: i64,
        allowed: String,
    },

    /// Work needed exceeds the configured budget.
    #[error("budget exceeded for {what}: needs {needed} units, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u64,
    },

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
}

impl Error {
    pub(crate) fn format(line: Option<usize>, message: impl Into<String>) -> Self {
        Error::Format {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn out_of_range(what: &'static str, value: i64, allowed: impl Into<String>) -> Self {
        Error::OutOfRange {
            what,
            value,
            allowed: allowed.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
