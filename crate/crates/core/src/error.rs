use thiserror::Error;

use crate::stopset::StoppingSet;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Partial outcome of an enumeration that ran out of node expansions.
#[derive(Debug, Clone, PartialEq)]
pub struct BudgetExceeded {
    /// Every stopping set of size `<= certified_size` is contained in `partial`.
    pub certified_size: usize,
    pub partial: Vec<StoppingSet>,
    pub expansions: u64,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("degree realization failed: {0}")]
    Realization(String),

    #[error("not found: {0}")]
    NotFound(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(
        "enumeration budget exceeded after {} expansions (complete up to size {})",
        .0.expansions,
        .0.certified_size
    )]
    Budget(Box<BudgetExceeded>),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("size guard: {0}")]
    SizeGuard(String),

    #[error("corrupted auxiliary bookkeeping: {0}")]
    Corruption(String),

    #[error("stage `{stage}` failed: {source}")]
    Stage { stage: String, source: Box<Error> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn params(msg: impl Into<String>) -> Self {
        Error::InvalidParameters(msg.into())
    }

    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }

    pub(crate) fn in_stage(self, stage: &str) -> Self {
        Error::Stage {
            stage: stage.to_string(),
            source: Box::new(self),
        }
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }

    /// Process exit code used by the command-line frontend.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameters(_) | Error::Realization(_) | Error::NotFound(_) => 2,
            Error::Parse { .. } | Error::Json(_) => 3,
            Error::Budget(_) => 4,
            Error::Contract(_) | Error::SizeGuard(_) | Error::Corruption(_) => 5,
            Error::Stage { source, .. } => source.exit_code(),
            Error::Io(_) => 1,
        }
    }
}
