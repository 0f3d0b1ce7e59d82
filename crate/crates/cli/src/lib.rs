//! Command-line front end for the hyperlens imaging library: image file
//! I/O, pipeline invocation, parameter sweeps, and report emission.
//!
//! Everything user-facing lives here — the core library stays free of
//! filesystem and process concerns. The binary is a thin wrapper over
//! [`run`]; commands are also callable as library functions so integration
//! tests can drive them without spawning processes.
//!
//! Exit-code contract (stable):
//!
//! | code | meaning                                        |
//! |------|------------------------------------------------|
//! | 0    | success                                        |
//! | 1    | usage error (bad flags, malformed spec string) |
//! | 2    | domain error (dimensions, preconditions)       |
//! | 3    | I/O error (missing/corrupt/unwritable files)   |

pub mod args;
pub mod commands;
pub mod io;
pub mod manifest;
pub mod units;

use hyperlens::Error as CoreError;

/// Top-level error for the CLI layer: core errors plus file-level and
/// sweep-bound failures, each mapped to a stable exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("parameter grid has {cells} cells, more than the {max}-run bound")]
    GridTooLarge { cells: usize, max: usize },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    BadFile(String),
}

impl CliError {
    /// Wrap an I/O error with the path it happened on.
    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// The stable exit code for this error (see module docs).
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(CoreError::ParseError { .. }) => 1,
            CliError::Core(_) | CliError::GridTooLarge { .. } => 2,
            CliError::Io { .. } | CliError::BadFile(_) => 3,
        }
    }
}

/// Dispatch a parsed invocation to its command.
pub fn run(cli: args::Cli) -> Result<(), CliError> {
    match cli.command {
        args::Command::Scene(a) => commands::scene::run(&a),
        args::Command::Capture(a) => commands::capture::run(&a),
        args::Command::Reconstruct(a) => commands::reconstruct::run(&a),
        args::Command::Compare(a) => commands::compare::run(&a),
        args::Command::Sweep(a) => commands::sweep::run(&a),
        args::Command::Radiometry(a) => commands::radiometry::run(&a),
    }
}
