use thiserror::Error;

use lfgt_core::lsubgroup::TheoryError;
use lfgt_core::verify::VerifyError;
use lfgt_core::{GroupError, LatticeError, SubsetError};

/// Exit codes: 0 predicate true / computation done, 1 predicate false,
/// 2 input error, 3 internal error or exceeded budget.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}: {msg}")]
    Syntax {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("unknown reference `{0}` (not a loaded name or builtin key)")]
    UnknownReference(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Syntax { .. }
            | CliError::Io { .. }
            | CliError::UnknownReference(_)
            | CliError::Domain(_) => 2,
            CliError::Budget(_) | CliError::Internal(_) => 3,
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::OrderCap(_) => CliError::Budget(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<SubsetError> for CliError {
    fn from(e: SubsetError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<TheoryError> for CliError {
    fn from(e: TheoryError) -> Self {
        match e {
            TheoryError::SearchBudgetExceeded(_, _) => CliError::Budget(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::OracleCapExceeded(_, _) => CliError::Budget(e.to_string()),
            VerifyError::BadSpec(_) => CliError::Domain(e.to_string()),
            VerifyError::Theory(t) => t.into(),
        }
    }
}
