use std::fmt;

use serde::Serialize;

/// 1-based line and column.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DslError {
    #[error("{pos}: {message}")]
    Lex { pos: Pos, message: String },

    #[error("{pos}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        pos: Pos,
        found: String,
        expected: Vec<String>,
    },

    #[error("{pos}: unknown identifier `{name}`")]
    UnknownIdentifier { pos: Pos, name: String },

    #[error("{pos}: `{name}` is already declared")]
    Redeclared { pos: Pos, name: String },

    #[error("{pos}: {message}")]
    Degree { pos: Pos, message: String },

    #[error("{pos}: {message}")]
    Runtime { pos: Pos, message: String },

    #[error("{0}")]
    Io(String),
}

impl DslError {
    pub fn pos(&self) -> Option<Pos> {
        match self {
            DslError::Lex { pos, .. }
            | DslError::Syntax { pos, .. }
            | DslError::UnknownIdentifier { pos, .. }
            | DslError::Redeclared { pos, .. }
            | DslError::Degree { pos, .. }
            | DslError::Runtime { pos, .. } => Some(*pos),
            DslError::Io(_) => None,
        }
    }

    /// Errors raised while reading and checking a document, as opposed to running it.
    pub fn is_parse_error(&self) -> bool {
        matches!(
            self,
            DslError::Lex { .. }
                | DslError::Syntax { .. }
                | DslError::UnknownIdentifier { .. }
                | DslError::Redeclared { .. }
                | DslError::Degree { .. }
        )
    }

    pub fn runtime(pos: Pos, err: impl fmt::Display) -> Self {
        DslError::Runtime {
            pos,
            message: err.to_string(),
        }
    }
}
