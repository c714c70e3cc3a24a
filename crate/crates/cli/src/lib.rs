//! Seeded experiment runner around the `oja-regret` library.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input or configuration,
//! 3 a deterministic bound that should always hold was violated.

pub mod adversary;
pub mod commands;
pub mod config;
pub mod output;
pub mod seeds;

use std::ffi::OsString;

use clap::Parser;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("bound violated: {0}")]
    Bound(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Bound(_) => 3,
        }
    }
}

impl From<oja_regret::Error> for CliError {
    fn from(e: oja_regret::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

const THREADS_VAR: &str = "OJA_REGRET_THREADS";

fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_VAR) {
        let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            CliError::Validation(format!(
                "{THREADS_VAR} must be a positive integer, got {v:?}"
            ))
        })?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Io(e.to_string()))
}

/// Parses `args` (including the program name), runs the command, prints its
/// one-line summary and returns the process exit code.
pub fn run(args: Vec<OsString>) -> i32 {
    let args = match config::inject_config(args) {
        Ok(args) => args,
        Err(e) => return report(e),
    };
    let cli = match commands::Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match thread_pool().and_then(|pool| pool.install(|| commands::dispatch(cli))) {
        Ok(summary) => {
            println!("{summary}");
            0
        }
        Err(e) => report(e),
    }
}

fn report(e: CliError) -> i32 {
    eprintln!("error: {e}");
    e.exit_code()
}
