//! Time sweep of one configuration and its output files.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use rayon::prelude::*;
use tomodyn::fock::Populations;
use tomodyn::numerics::format_sig;
use tomodyn::quantifiers::{entropy_bound, local_minima_indices, QuantifierEvaluator, SLICE_NORMALIZATION_TOL};
use tomodyn::tomography::uniform_thetas;
use tomodyn::{DensityMatrix, Propagator, QuantifierRecord, Tomogram, Tomographer};

use crate::config::{ExperimentConfig, Snapshot};
use crate::{with_workers, RunError};

pub const CSV_HEADER: &str = "t,t_over_trev,nonclassical_area,entropy_0,entropy_90,entropy_sum,trace,purity";

/// Tolerated `|Tr ρ − 1|` for any propagated state.
pub const TRACE_TOL: f64 = 1e-10;
/// Tolerated shortfall below `1 + ln π`.
pub const ENTROPY_BOUND_TOL: f64 = 1e-6;
/// Largest population allowed in the last five Fock levels.
pub const TAIL_MASS_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct Series {
    pub records: Vec<QuantifierRecord>,
    pub area_minima: Vec<usize>,
    pub entropy_minima: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub series: Series,
    pub files: Vec<PathBuf>,
}

/// `ρ(0)` at the configured cutoff, refusing states that leak past it.
pub fn initial_density(config: &ExperimentConfig) -> Result<DensityMatrix, RunError> {
    let rho = config.state.density(config.dim)?;
    if !config.allow_truncation {
        let k = config.dim.saturating_sub(5).max(1);
        let tail = rho.tail_mass(k);
        if tail >= TAIL_MASS_LIMIT {
            return Err(RunError::Validation(format!(
                "population {tail:.3e} above level {k} at dim {}; raise sim.dim or set sim.allow_truncation",
                config.dim
            )));
        }
    }
    Ok(rho)
}

pub fn propagator(config: &ExperimentConfig) -> Propagator {
    Propagator::new(config.medium, config.damping, config.solver)
}

fn check_trace(rho: &DensityMatrix, t: f64) -> Result<(), RunError> {
    let drift = rho.trace() - 1.0;
    if drift.abs() >= TRACE_TOL {
        return Err(RunError::Numerical(format!("trace off by {drift:.3e} at t={t}")));
    }
    Ok(())
}

/// Quantifier records for every time sample, in time order.
pub fn compute_series(config: &ExperimentConfig) -> Result<Series, RunError> {
    let rho0 = initial_density(config)?;
    let propagator = propagator(config);
    let evaluator = QuantifierEvaluator::new(
        config.axis,
        config.dim,
        config.theta_count,
        config.area_path(),
        config.entropy_theta,
    )?;
    let t_rev = config.revival_time();
    let bound = entropy_bound();
    let records = config
        .time
        .times()
        .into_par_iter()
        .map(|t| {
            let rho = propagator.propagate(&rho0, t);
            check_trace(&rho, t)?;
            let record = evaluator.record(&rho, t, t_rev)?;
            if record.entropy_sum < bound - ENTROPY_BOUND_TOL {
                return Err(RunError::Numerical(format!(
                    "entropy sum {:.9} below 1 + ln π at t={t}",
                    record.entropy_sum
                )));
            }
            Ok(record)
        })
        .collect::<Result<Vec<_>, RunError>>()?;
    let area: Vec<f64> = records.iter().map(|r| r.nonclassical_area).collect();
    let entropy: Vec<f64> = records.iter().map(|r| r.entropy_sum).collect();
    Ok(Series {
        area_minima: local_minima_indices(&area, config.prominence),
        entropy_minima: local_minima_indices(&entropy, config.prominence),
        records,
    })
}

/// Tomogram of `ρ(t)` on the configured axis at `count` uniform phases.
pub fn snapshot_tomogram(config: &ExperimentConfig, rho0: &DensityMatrix, snap: &Snapshot) -> Result<Tomogram, RunError> {
    let rho = propagator(config).propagate(rho0, snap.t);
    check_trace(&rho, snap.t)?;
    let tomo = Tomographer::new(config.axis, config.dim).tomogram(&rho, &uniform_thetas(config.output.tomogram_theta_count));
    tomo.check_normalization(SLICE_NORMALIZATION_TOL)?;
    Ok(tomo)
}

pub fn write_csv<W: Write>(records: &[QuantifierRecord], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        let fields = [
            r.t,
            r.t_over_trev,
            r.nonclassical_area,
            r.entropy_0,
            r.entropy_90,
            r.entropy_sum,
            r.trace,
            r.purity,
        ];
        let row: Vec<String> = fields.iter().map(|&x| format_sig(x, 12)).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn write_minima<W: Write>(series: &Series, mut out: W) -> std::io::Result<()> {
    writeln!(out, "# quantity index t t_over_trev value")?;
    for (name, idx) in [("nonclassical_area", &series.area_minima), ("entropy_sum", &series.entropy_minima)] {
        for &i in idx {
            let r = &series.records[i];
            let value = if name == "entropy_sum" { r.entropy_sum } else { r.nonclassical_area };
            writeln!(
                out,
                "{name} {i} {} {} {}",
                format_sig(r.t, 12),
                format_sig(r.t_over_trev, 12),
                format_sig(value, 12)
            )?;
        }
    }
    Ok(())
}

/// Computes the series and writes every configured output file.
pub fn run_experiment(config: &ExperimentConfig) -> Result<RunOutcome, RunError> {
    let (series, tomograms) = with_workers(|| -> Result<_, RunError> {
        let series = compute_series(config)?;
        let rho0 = initial_density(config)?;
        let tomograms = config
            .output
            .snapshots
            .par_iter()
            .map(|s| snapshot_tomogram(config, &rho0, s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((series, tomograms))
    })??;

    let out = &config.output;
    fs::create_dir_all(&out.dir)?;
    let mut files = Vec::new();
    let mut create = |file: String| -> Result<BufWriter<File>, RunError> {
        let path = out.dir.join(file);
        let f = BufWriter::new(File::create(&path)?);
        files.push(path);
        Ok(f)
    };
    if out.quantifiers {
        let mut f = create(format!("{}.csv", out.name))?;
        write_csv(&series.records, &mut f)?;
        f.flush()?;
    }
    if out.minima {
        let mut f = create(format!("{}.minima.txt", out.name))?;
        write_minima(&series, &mut f)?;
        f.flush()?;
    }
    for (snap, tomo) in out.snapshots.iter().zip(&tomograms) {
        let mut f = create(format!("{}.tomo_{}.txt", out.name, snap.label))?;
        tomo.write_dump(&mut f)?;
        f.flush()?;
    }
    Ok(RunOutcome { series, files })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config_with_steps(steps: usize, extra: &str) -> ExperimentConfig {
        ExperimentConfig::parse(&format!(
            "state.kind = coherent\nstate.alpha_sq = 2\nsim.dim = 25\nsim.t_end_over_trev = 1\nsim.steps = {steps}\n{extra}"
        ))
        .unwrap()
    }

    fn config(extra: &str) -> ExperimentConfig {
        config_with_steps(20, extra)
    }

    #[test]
    fn series_is_time_ordered_and_revives() {
        let s = compute_series(&config("")).unwrap();
        assert_eq!(s.records.len(), 21);
        assert!(s.records.windows(2).all(|w| w[0].t < w[1].t));
        let (first, last) = (s.records[0], s.records[20]);
        assert!(first.nonclassical_area.abs() < 1e-8);
        assert!((last.nonclassical_area - first.nonclassical_area).abs() < 1e-6);
        assert_eq!(s.area_minima, vec![10]);
    }

    #[test]
    fn truncation_guard() {
        let c = ExperimentConfig::parse(
            "state.kind = coherent\nstate.alpha_sq = 20\nsim.dim = 20\nsim.t_end = 1\n",
        )
        .unwrap();
        assert!(matches!(compute_series(&c), Err(RunError::Validation(_))));
        let c = ExperimentConfig::parse(
            "state.kind = coherent\nstate.alpha_sq = 20\nsim.dim = 20\nsim.t_end = 1\nsim.allow_truncation = true\ngrid.x_max = 14\ngrid.n_x = 280\nsim.steps = 2\n",
        )
        .unwrap();
        assert!(initial_density(&c).is_ok());
    }

    #[test]
    fn narrow_grid_is_a_numerical_failure() {
        let c = config("grid.x_max = 2\ngrid.n_x = 40\n");
        assert!(matches!(compute_series(&c), Err(RunError::Numerical(_))));
    }

    #[test]
    fn csv_layout() {
        let s = compute_series(&config_with_steps(2, "")).unwrap();
        let mut buf = Vec::new();
        write_csv(&s.records, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0,0,"));
        assert!(lines.iter().all(|l| l.split(',').count() == 8));
        assert!(text.ends_with('\n'));
    }
}
