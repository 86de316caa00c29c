use std::path::PathBuf;

use pwtrace_core::Error;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write output: {0}")]
    Write(#[from] std::io::Error),
    #[error("{path}: malformed JSON: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("cannot serialize output: {0}")]
    Serialize(#[from] serde_json::Error),
    #[error("{0}")]
    Input(String),
    #[error("{}", describe(.0))]
    Core(#[from] Error),
}

impl CliError {
    /// 2 for a failed partition, 3 for a vanishing `S'`, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_partition_failure() => 2,
            CliError::Core(Error::DerivativeZero(_)) => 3,
            _ => 1,
        }
    }
}

fn fmt_points(zs: &[pwtrace_core::Complex]) -> String {
    let parts: Vec<String> = zs.iter().map(|z| format!("{}{:+}i", z.re, z.im)).collect();
    format!("[{}]", parts.join(", "))
}

// the core messages omit the offending points
fn describe(e: &Error) -> String {
    match e {
        Error::CapacityExceeded { group, capacity } => format!(
            "partition failed: group of {} points exceeds capacity {capacity}: {}",
            group.len(),
            fmt_points(group)
        ),
        Error::DiameterExceeded {
            group,
            diameter,
            limit,
        } => format!(
            "partition failed: group diameter {diameter} is not below {limit}: {}",
            fmt_points(group)
        ),
        other => other.to_string(),
    }
}

pub type CliResult<T> = Result<T, CliError>;
