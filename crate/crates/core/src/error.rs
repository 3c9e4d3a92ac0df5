use thiserror::Error;

/// Errors raised by the library. The three kinds map onto distinct CLI exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MagmaError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("resource cap exceeded: {what} (cap = {cap})")]
    Resource { what: String, cap: String },
}

impl MagmaError {
    pub(crate) fn syntax(pos: usize, msg: impl Into<String>) -> Self {
        MagmaError::Syntax { pos, msg: msg.into() }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        MagmaError::Domain(msg.into())
    }

    pub(crate) fn resource(what: impl Into<String>, cap: impl ToString) -> Self {
        MagmaError::Resource { what: what.into(), cap: cap.to_string() }
    }
}

pub type Result<T> = std::result::Result<T, MagmaError>;
