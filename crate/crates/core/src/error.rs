use std::fmt;

use thiserror::Error;

/// Line/column location inside a source text, both 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// Error raised while tokenizing or parsing expressions and problem files.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("{position}: unrecognized character {found:?}")]
    Lex { position: Position, found: char },
    #[error("{position}: {message}")]
    Syntax { position: Position, message: String },
}

impl ParseError {
    pub(crate) fn syntax(position: Position, message: impl Into<String>) -> Self {
        ParseError::Syntax {
            position,
            message: message.into(),
        }
    }

    pub fn position(&self) -> Position {
        match self {
            ParseError::Lex { position, .. } | ParseError::Syntax { position, .. } => *position,
        }
    }
}

/// An expression produced a value that is not a finite real.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
#[error("expression evaluated to a non-finite value ({value})")]
pub struct EvalError {
    pub value: f64,
}

/// Which constraint list an index refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintKind {
    Equality,
    Inequality,
}

impl fmt::Display for ConstraintKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstraintKind::Equality => f.write_str("equality"),
            ConstraintKind::Inequality => f.write_str("inequality"),
        }
    }
}

/// Errors from building problems, evaluating them and running solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("objective: {0}")]
    Objective(EvalError),
    #[error("{kind} constraint {index}: {source}")]
    Constraint {
        kind: ConstraintKind,
        /// 1-based constraint index.
        index: usize,
        source: EvalError,
    },
    #[error("map component {index}: {source}")]
    MapComponent { index: usize, source: EvalError },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("solver failed: {0}")]
    Solver(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, actual })
    }
}
