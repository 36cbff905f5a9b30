use std::fmt;

/// Position in a source text, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("syntax error at {span}: {message}")]
    Syntax { span: Span, message: String },

    /// A level or proximity value that does not belong to the declared value system.
    #[error("value error: {0}")]
    Value(String),

    #[error("arity conflict: {predicate} used with arity {first} and {second}")]
    Arity {
        predicate: String,
        first: usize,
        second: usize,
    },

    #[error("unsafe rule: {0}")]
    Safety(String),

    #[error("stratification error: {0}")]
    Stratification(String),

    #[error("value system mismatch: {0}")]
    SystemMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn syntax(span: Span, message: impl Into<String>) -> Self {
        Error::Syntax {
            span,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
