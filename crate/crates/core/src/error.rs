use thiserror::Error;

use crate::arith::Integer;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("forms have zero resultant")]
    SingularPair,

    #[error("form has zero discriminant")]
    DegenerateForm,

    #[error("no solution of {form} up to height {bound}")]
    TernaryNotFound { form: String, bound: Integer },

    #[error("every solution of {form} up to height {bound} has z = 0")]
    DegenerateZ { form: String, bound: Integer },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("unsupported curve: {0}")]
    UnsupportedCurve(String),

    #[error("unsupported system: {0}")]
    UnsupportedSystem(String),

    #[error("unsupported sequence: {0}")]
    UnsupportedSpec(String),

    #[error("external solver failed on `{equation}`: {reason}")]
    ExternalSolver { equation: String, reason: String },

    #[error("{branch}: {source}")]
    Branch {
        branch: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub fn in_branch(self, branch: impl Into<String>) -> Error {
        Error::Branch {
            branch: branch.into(),
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
