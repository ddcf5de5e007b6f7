use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("invalid variable name `{0}`")]
    InvalidName(String),

    #[error("`{0}` expects at least one operand")]
    EmptyGate(&'static str),

    #[error("duplicate let-binding `{0}`")]
    DuplicateBinding(String),

    #[error("inconsistent term: `{0}` occurs with both polarities")]
    InconsistentTerm(String),

    #[error("variable `{0}` is not assigned")]
    Unassigned(String),

    #[error("enumeration over {vars} variables exceeds the cap of {cap}")]
    CapExceeded { vars: usize, cap: usize },

    #[error("circuit mentions variables outside the problem: {0}")]
    ForeignVariables(String),

    #[error("forgetting {count} variables exceeds the limit of {limit}")]
    TooManyExtraVariables { count: usize, limit: usize },

    #[error("operation requires a mono-label problem")]
    NotMonoLabel,

    #[error("classifier does not have the classification property")]
    Uncertified,

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("invalid instance `{0}`")]
    InvalidInstance(String),

    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
