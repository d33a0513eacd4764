//! Experiment runner for `tomodyn`: configuration files, time sweeps with CSV
//! and tomogram output, cutoff convergence sweeps, solver comparison reports
//! and the built-in figure presets.

pub mod config;
pub mod convergence;
pub mod experiment;
pub mod oracle;
pub mod presets;

use thiserror::Error;

pub use config::ExperimentConfig;
pub use convergence::{convergence_sweep, ConvergenceReport};
pub use experiment::{compute_series, run_experiment, RunOutcome, Series};
pub use oracle::{oracle_report, OracleReport};

#[derive(Debug, Error)]
pub enum RunError {
    #[error("invalid configuration: {0}")]
    Validation(String),

    #[error("numerical check failed: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl RunError {
    /// Process exit status for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Validation(_) => 2,
            RunError::Numerical(_) => 3,
            RunError::Io(_) => 1,
        }
    }
}

impl From<tomodyn::Error> for RunError {
    fn from(e: tomodyn::Error) -> Self {
        match e {
            tomodyn::Error::InvalidParameter(_) => RunError::Validation(e.to_string()),
            tomodyn::Error::TraceDrift { .. } | tomodyn::Error::Normalization { .. } => {
                RunError::Numerical(e.to_string())
            }
        }
    }
}

/// Runs `f` on a pool sized by `TOMODYN_WORKERS` when that is set, otherwise
/// on the global pool.
pub fn with_workers<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T, RunError> {
    match std::env::var("TOMODYN_WORKERS") {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .ok()
                .filter(|&n| n > 0)
                .ok_or_else(|| RunError::Validation(format!("TOMODYN_WORKERS must be a positive integer, got `{v}`")))?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| RunError::Validation(e.to_string()))?;
            Ok(pool.install(f))
        }
        Err(_) => Ok(f()),
    }
}
