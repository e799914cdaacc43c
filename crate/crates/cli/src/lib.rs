//! `neqcp sweep`: configuration loading, velocity sweeps and table emission.

pub mod axis;
pub mod config;
pub mod sweep;
pub mod table;

use std::path::{Path, PathBuf};
use thiserror::Error;

pub use axis::{Axis, AxisKind};
pub use config::{load_config, parse_config, SystemConfig};
pub use sweep::{run_sweep, Mode, SweepOutput, SweepRequest};
pub use table::{Format, Table, Value};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("config parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid configuration: {0}")]
    Validation(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("runtime failure: {0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Validation(_) => EXIT_CONFIG,
            CliError::Io { .. } | CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_FLAGGED: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

/// `<stem>_<suffix>.<ext>` next to `out`.
pub fn sibling_path(out: &Path, suffix: &str, format: Format) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "sweep".into());
    out.with_file_name(format!("{stem}_{suffix}.{}", format.extension()))
}

/// Runs a sweep and writes the main table plus any sibling tables. Returns
/// the exit code: rows that failed outright give 3, flagged rows give 2.
pub fn execute(req: &SweepRequest, out: &Path, format: Format) -> Result<i32, CliError> {
    let result = run_sweep(req)?;
    result.main.write(out, format)?;
    if let Some(t) = &result.thermal {
        t.write(&sibling_path(out, "thermal", format), format)?;
    }
    if let Some(t) = &result.teff {
        if !t.rows.is_empty() {
            t.write(&sibling_path(out, "teff", format), format)?;
        }
    }
    Ok(if result.failed_rows > 0 {
        EXIT_RUNTIME
    } else if result.flagged_rows > 0 {
        EXIT_FLAGGED
    } else {
        EXIT_OK
    })
}
