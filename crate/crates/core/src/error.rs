use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Position inside parsed text. Lines and columns are 1-based.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceSpan {
    pub file: Option<String>,
    pub line: usize,
    pub column: usize,
}

impl SourceSpan {
    pub fn new(line: usize, column: usize) -> Self {
        SourceSpan {
            file: None,
            line,
            column,
        }
    }

    pub fn in_file(mut self, file: impl Into<String>) -> Self {
        self.file = Some(file.into());
        self
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.file {
            Some(file) => write!(f, "{}:{}:{}", file, self.line, self.column),
            None => write!(f, "{}:{}", self.line, self.column),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("denominator vanishes under binding {binding}")]
    VanishingDenominator { binding: String },

    #[error("{span}: {message}")]
    Parse { span: SourceSpan, message: String },

    #[error("{span}: unknown generator `{name}`")]
    UnknownGenerator { span: SourceSpan, name: String },

    #[error("{span}: relation is not homogeneous, degrees {degrees:?}")]
    NotHomogeneousAt { span: SourceSpan, degrees: Vec<i64> },

    #[error("inhomogeneous polynomial, degrees {degrees:?}")]
    Inhomogeneous { degrees: Vec<i64> },

    #[error("generator tables differ")]
    TableMismatch,

    #[error("leading term of the zero polynomial")]
    ZeroPolynomial,

    #[error("inconsistent presentation: relation span contains the nonzero constant {constant}")]
    InconsistentPresentation { constant: String },

    #[error("unknown builtin `{name}`, valid names: {valid}")]
    UnknownBuiltin { name: String, valid: String },

    #[error("unknown suite `{name}`, registered suites: {valid}")]
    UnknownSuite { name: String, valid: String },

    #[error("no degree map for {0}")]
    NoGrading(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("not quadratic: {0}")]
    NotQuadratic(String),

    #[error("matrix is not an involution")]
    NotInvolutive,

    #[error("bad parameter binding `{0}`")]
    Binding(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
