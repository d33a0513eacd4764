//! Stability of observables under increasing Fock cutoff.

use std::fmt;

use rayon::prelude::*;
use tomodyn::fock::ladder_expectations;
use tomodyn::quantifiers::nonclassical_area;
use tomodyn::AreaPath;

use crate::config::ExperimentConfig;
use crate::experiment::propagator;
use crate::RunError;

pub const CONVERGENCE_TOL: f64 = 1e-10;
const PROBES: usize = 5;

/// Largest change of each observable between two successive cutoffs, over all probe times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffStep {
    pub from: usize,
    pub to: usize,
    pub trace: f64,
    pub number: f64,
    pub area: f64,
}

impl CutoffStep {
    pub fn max_change(&self) -> f64 {
        self.trace.max(self.number).max(self.area)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub probe_times: Vec<f64>,
    pub steps: Vec<CutoffStep>,
    /// Smallest cutoff from which every later step stays below tolerance.
    pub converged: Option<usize>,
    pub tolerance: f64,
}

impl ConvergenceReport {
    pub fn passed(&self) -> bool {
        self.converged.is_some()
    }
}

impl fmt::Display for ConvergenceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "probe times: {:?}", self.probe_times)?;
        writeln!(f, "{:>6} {:>6} {:>12} {:>12} {:>12}", "from", "to", "d_trace", "d_number", "d_area")?;
        for s in &self.steps {
            writeln!(
                f,
                "{:>6} {:>6} {:>12.3e} {:>12.3e} {:>12.3e}",
                s.from, s.to, s.trace, s.number, s.area
            )?;
        }
        match self.converged {
            Some(d) => write!(f, "PASS at dim {d} (tol {:.0e})", self.tolerance),
            None => write!(f, "FAIL: no cutoff converged to {:.0e}", self.tolerance),
        }
    }
}

/// Compares trace, `⟨N⟩` and the nonclassical area across `dims` at five
/// probe times spanning the configured sweep.
pub fn convergence_sweep(config: &ExperimentConfig, dims: &[usize]) -> Result<ConvergenceReport, RunError> {
    if dims.len() < 2 {
        return Err(RunError::Validation("convergence sweep needs at least two cutoffs".into()));
    }
    if dims.windows(2).any(|w| w[1] <= w[0]) || dims[0] < 2 {
        return Err(RunError::Validation(format!("cutoffs must be increasing and >= 2, got {dims:?}")));
    }
    let grid = &config.time;
    let probe_times: Vec<f64> = (0..PROBES)
        .map(|k| grid.t_start() + (grid.t_end() - grid.t_start()) * k as f64 / (PROBES - 1) as f64)
        .collect();
    let prop = propagator(config);
    let theta_count = config.theta_count;

    let observables = dims
        .par_iter()
        .map(|&dim| {
            let rho0 = config.state.density(dim)?;
            probe_times
                .iter()
                .map(|&t| {
                    let rho = prop.propagate(&rho0, t);
                    let area = nonclassical_area(&rho, theta_count, AreaPath::Analytic)?;
                    Ok([rho.trace(), ladder_expectations(&rho).number, area])
                })
                .collect::<Result<Vec<_>, RunError>>()
        })
        .collect::<Result<Vec<_>, RunError>>()?;

    let steps: Vec<CutoffStep> = observables
        .windows(2)
        .zip(dims.windows(2))
        .map(|(obs, d)| {
            let mut change = [0.0f64; 3];
            for (a, b) in obs[0].iter().zip(&obs[1]) {
                for q in 0..3 {
                    change[q] = change[q].max((a[q] - b[q]).abs());
                }
            }
            CutoffStep {
                from: d[0],
                to: d[1],
                trace: change[0],
                number: change[1],
                area: change[2],
            }
        })
        .collect();

    let mut converged = None;
    for (i, step) in steps.iter().enumerate().rev() {
        if step.max_change() < CONVERGENCE_TOL {
            converged = Some(dims[i]);
        } else {
            break;
        }
    }
    Ok(ConvergenceReport {
        probe_times,
        steps,
        converged,
        tolerance: CONVERGENCE_TOL,
    })
}
