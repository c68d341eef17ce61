//! File formats and command-line front end for `eulerlab-core`.
//!
//! Every command prints a single JSON document on stdout and a one-line
//! summary on stderr. Exit codes: `0` success, `1` bad input, `2` a
//! mathematical check failed.

#![warn(missing_docs)]

pub mod cli;
mod error;
pub mod formats;

pub use cli::{run, Cli, Report};
pub use error::CliError;
pub use formats::parse_rep;

/// Environment variable holding the worker thread count.
pub const THREADS_VAR: &str = "EULERLAB_THREADS";

/// Configures the global thread pool from [`THREADS_VAR`], if set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::InvalidArgument(format!("{THREADS_VAR}={raw} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::InvalidArgument(e.to_string()))
}
