use std::path::PathBuf;

use thiserror::Error;
use ulc_core::dist::DistError;
use ulc_core::ineq::IneqError;
use ulc_core::rigor::RigorError;

pub const EXIT_USAGE: i32 = 64;
pub const EXIT_SOFTWARE: i32 = 70;
pub const EXIT_CANT_CREATE: i32 = 74;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => EXIT_USAGE,
            Self::Output { .. } => EXIT_CANT_CREATE,
            Self::Compute(_) => EXIT_SOFTWARE,
        }
    }
}

impl From<RigorError> for CliError {
    fn from(e: RigorError) -> Self {
        match e {
            RigorError::Parse(_) | RigorError::InvalidPrecision(_) | RigorError::InvalidPolicy(_) => {
                Self::Usage(e.to_string())
            }
            _ => Self::Compute(e.to_string()),
        }
    }
}

impl From<DistError> for CliError {
    fn from(e: DistError) -> Self {
        match e {
            DistError::Rigor(r) => r.into(),
            DistError::InvalidParameter(_)
            | DistError::NonContiguous
            | DistError::Empty
            | DistError::Unnormalized(_)
            | DistError::Format(_) => Self::Usage(e.to_string()),
            DistError::NotExact(_) => Self::Compute(e.to_string()),
        }
    }
}

impl From<IneqError> for CliError {
    fn from(e: IneqError) -> Self {
        match e {
            IneqError::Precondition(msg) => Self::Usage(msg),
            IneqError::Dist(d) => d.into(),
            IneqError::Rigor(r) => r.into(),
        }
    }
}
