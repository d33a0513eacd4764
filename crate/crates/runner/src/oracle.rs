//! Deviation of the factorized amplitude-damping form from the exact solution.

use std::fmt;

use rayon::prelude::*;
use tomodyn::evolution::{coherence_block_solve, propagate_amplitude_damping_closed, DampingChannel};
use tomodyn::{DensityMatrix, MediumSpec};

use crate::config::ExperimentConfig;
use crate::experiment::initial_density;
use crate::RunError;

/// Largest tolerated population mismatch between the two solvers.
pub const DIAGONAL_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverDeviation {
    pub t: f64,
    pub diagonal: f64,
    pub off_diagonal: f64,
}

/// Max element-wise `|ρ_closed − ρ_exact|`, split into diagonal and off-diagonal parts.
pub fn solver_deviation(rho0: &DensityMatrix, medium: &MediumSpec, gamma: f64, t: f64) -> SolverDeviation {
    let exact = coherence_block_solve(rho0, medium, gamma, t);
    let closed = propagate_amplitude_damping_closed(rho0, medium, gamma, t);
    let (a, b) = (exact.elements(), closed.elements());
    let mut diagonal = 0.0f64;
    let mut off_diagonal = 0.0f64;
    for ((i, j), x) in a.indexed_iter() {
        let d = (x - b[[i, j]]).norm();
        if i == j {
            diagonal = diagonal.max(d);
        } else {
            off_diagonal = off_diagonal.max(d);
        }
    }
    SolverDeviation { t, diagonal, off_diagonal }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub rows: Vec<SolverDeviation>,
}

impl OracleReport {
    pub fn max_diagonal(&self) -> f64 {
        self.rows.iter().map(|r| r.diagonal).fold(0.0, f64::max)
    }

    pub fn max_off_diagonal(&self) -> f64 {
        self.rows.iter().map(|r| r.off_diagonal).fold(0.0, f64::max)
    }
}

impl fmt::Display for OracleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>16} {:>12} {:>12}", "t", "diagonal", "off_diagonal")?;
        for r in &self.rows {
            writeln!(f, "{:>16.9} {:>12.3e} {:>12.3e}", r.t, r.diagonal, r.off_diagonal)?;
        }
        write!(
            f,
            "max diagonal {:.3e} (limit {:.0e}), max off-diagonal {:.3e}",
            self.max_diagonal(),
            DIAGONAL_TOL,
            self.max_off_diagonal()
        )
    }
}

/// Compares the two amplitude-damping solvers at every configured time sample.
pub fn oracle_report(config: &ExperimentConfig) -> Result<OracleReport, RunError> {
    if config.damping.channel() != DampingChannel::Amplitude {
        return Err(RunError::Validation("oracle report needs damping.channel = amplitude".into()));
    }
    let rho0 = initial_density(config)?;
    let gamma = config.damping.gamma();
    let rows: Vec<SolverDeviation> = config
        .time
        .times()
        .into_par_iter()
        .map(|t| solver_deviation(&rho0, &config.medium, gamma, t))
        .collect();
    let report = OracleReport { rows };
    if report.max_diagonal() >= DIAGONAL_TOL {
        return Err(RunError::Numerical(format!(
            "solver populations differ by {:.3e}",
            report.max_diagonal()
        )));
    }
    Ok(report)
}
