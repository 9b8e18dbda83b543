//! Error type with the CLI exit-code mapping.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    /// Config parse/validation problems; every violated constraint listed.
    #[error("invalid configuration:\n{}", .0.join("\n"))]
    Validation(Vec<String>),
    /// The solver's blow-up guard tripped.
    #[error("solver guard: {0}")]
    SolverGuard(fnls_core::Error),
    /// One or more checks of the invariant suite failed.
    #[error("{0} check(s) failed")]
    ChecksFailed(usize),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    /// 2 = validation, 3 = solver guard / failed checks, 4 = I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Validation(_) => 2,
            HarnessError::SolverGuard(_) | HarnessError::ChecksFailed(_) => 3,
            HarnessError::Io(_) => 4,
        }
    }

    pub fn one(msg: impl Into<String>) -> HarnessError {
        HarnessError::Validation(vec![msg.into()])
    }
}

impl From<fnls_core::Error> for HarnessError {
    fn from(e: fnls_core::Error) -> Self {
        match e {
            fnls_core::Error::BlowUp { .. } => HarnessError::SolverGuard(e),
            other => HarnessError::Validation(vec![other.to_string()]),
        }
    }
}
