use num_complex::Complex64;
use thiserror::Error;

use crate::algebra::BasisTag;
use crate::holoexpr::VarId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("basis mismatch: expected {expected}, found {found}")]
    BasisMismatch { expected: BasisTag, found: BasisTag },

    #[error("singular basis matrix (|det| = {det:e})")]
    SingularMatrix { det: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{function}: argument must not depend on {var}")]
    VariableViolation { function: &'static str, var: VarId },

    #[error("degenerate parameters: alpha1*alpha2 - alpha3*alpha4 = {gap} (need |gap| > 1e-12)")]
    DegenerateParams { gap: Complex64 },

    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },

    #[error("variable `{name}` at column {column} does not belong to {expected} coordinates")]
    WrongCoordinateSystem {
        column: usize,
        name: String,
        expected: &'static str,
    },

    #[error("schema error: {0}")]
    Schema(String),

    #[error("{path}: {source}")]
    AtPath { path: String, source: Box<Error> },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Attaches a JSON field path, nesting under any path already present.
    pub fn at(self, path: impl Into<String>) -> Error {
        let path = path.into();
        match self {
            Error::AtPath {
                path: inner,
                source,
            } => Error::AtPath {
                path: join_path(&path, &inner),
                source,
            },
            other => Error::AtPath {
                path,
                source: Box::new(other),
            },
        }
    }

    /// The innermost error, with any field path stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtPath { source, .. } => source.root(),
            other => other,
        }
    }
}

fn join_path(outer: &str, inner: &str) -> String {
    if inner.starts_with('[') {
        format!("{outer}{inner}")
    } else {
        format!("{outer}.{inner}")
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
