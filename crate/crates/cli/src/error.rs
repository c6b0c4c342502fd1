//! Error-to-exit-code mapping and the structured stderr payload.

use orthorep_core::Error as CoreError;
use serde::Serialize;

/// Stable exit codes, one per failure class. 0 is success and 2 is claimed
/// by clap for usage errors.
pub mod exit_code {
    pub const IO: i32 = 1;
    pub const SCHEDULE_INFEASIBLE: i32 = 3;
    pub const RETRIES_EXHAUSTED: i32 = 4;
    pub const BUDGET_EXCEEDED: i32 = 5;
    pub const VERIFICATION_FAILED: i32 = 6;
    pub const INVALID_PARAMETER: i32 = 7;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Core(#[from] CoreError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Self::Io { path: path.display().to_string(), source }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => match e {
                CoreError::ScheduleInfeasible { .. } => "schedule_infeasible",
                CoreError::ConstructionFailed(_) => "retries_exhausted",
                CoreError::BudgetExceeded { .. } => "budget_exceeded",
                CoreError::InvalidParameter(_)
                | CoreError::DimensionMismatch(_)
                | CoreError::SizeGuard(_) => "invalid_parameter",
                CoreError::InvalidRepresentation { .. } => "verification_failed",
                CoreError::NotSymmetric(_) | CoreError::EigenNoConvergence(_) => "numerical",
            },
            CliError::Io { .. } => "io",
            CliError::Parse { .. } => "parse",
            CliError::Verification(_) => "verification_failed",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e {
                CoreError::ScheduleInfeasible { .. } => exit_code::SCHEDULE_INFEASIBLE,
                CoreError::ConstructionFailed(_) => exit_code::RETRIES_EXHAUSTED,
                CoreError::BudgetExceeded { .. } => exit_code::BUDGET_EXCEEDED,
                CoreError::InvalidRepresentation { .. } => exit_code::VERIFICATION_FAILED,
                _ => exit_code::INVALID_PARAMETER,
            },
            CliError::Io { .. } | CliError::Parse { .. } => exit_code::IO,
            CliError::Verification(_) => exit_code::VERIFICATION_FAILED,
        }
    }
}

#[derive(Serialize)]
struct ErrorDoc<'a> {
    code: i32,
    kind: &'a str,
    message: String,
}

/// Machine-readable error JSON for stderr.
pub fn error_json(err: &CliError) -> String {
    serde_json::to_string(&ErrorDoc {
        code: err.exit_code(),
        kind: err.kind(),
        message: err.to_string(),
    })
    .expect("error serialization cannot fail")
}
