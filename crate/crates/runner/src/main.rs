use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tomodyn_runner::config::ExperimentConfig;
use tomodyn_runner::{convergence_sweep, oracle_report, presets, run_experiment, with_workers, RunError};

/// Nonlinear-medium quantum dynamics: tomograms, nonclassical area and tomographic entropy.
///
/// Set TOMODYN_WORKERS to fix the number of worker threads.
#[derive(Parser)]
#[command(name = "tomodyn", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file.
    Run { config: PathBuf },
    /// Run a built-in preset (`fig1` .. `fig20`).
    Preset {
        name: String,
        /// Output directory; defaults to `out/<name>`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the built-in presets.
    Presets,
    /// Check observables for stability as the Fock cutoff grows.
    Converge {
        config: PathBuf,
        /// Increasing cutoffs, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
    },
    /// Compare the factorized amplitude-damping form against the exact solver.
    Oracle { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(command: Command) -> Result<(), RunError> {
    match command {
        Command::Run { config } => {
            let config = ExperimentConfig::from_file(&config)?;
            report_run(&config)
        }
        Command::Preset { name, out } => {
            let preset = presets::preset(&name)
                .ok_or_else(|| RunError::Validation(format!("unknown preset `{name}`; try `tomodyn presets`")))?;
            let out = out.unwrap_or_else(|| PathBuf::from("out").join(preset.name));
            println!("{}: {}", preset.name, preset.summary);
            for run in &preset.runs {
                let config = run.config(&out)?;
                std::fs::create_dir_all(&out)?;
                std::fs::write(out.join(format!("{}.conf", config.output.name)), &run.text)?;
                report_run(&config)?;
            }
            Ok(())
        }
        Command::Presets => {
            for p in presets::all() {
                println!("{:<6} {}", p.name, p.summary);
            }
            Ok(())
        }
        Command::Converge { config, dims } => {
            let config = ExperimentConfig::from_file(&config)?;
            let report = with_workers(|| convergence_sweep(&config, &dims))??;
            println!("{report}");
            if report.passed() {
                Ok(())
            } else {
                Err(RunError::Numerical("cutoff sweep did not converge".into()))
            }
        }
        Command::Oracle { config } => {
            let config = ExperimentConfig::from_file(&config)?;
            let report = with_workers(|| oracle_report(&config))??;
            println!("{report}");
            Ok(())
        }
    }
}

fn report_run(config: &ExperimentConfig) -> Result<(), RunError> {
    let outcome = run_experiment(config)?;
    let series = &outcome.series;
    let times = |idx: &[usize]| -> String {
        let v: Vec<String> = idx
            .iter()
            .map(|&i| format!("{:.4}", series.records[i].t_over_trev))
            .collect();
        v.join(", ")
    };
    println!(
        "{}: {} samples; area minima at t/T_rev = [{}]; entropy minima at t/T_rev = [{}]",
        config.output.name,
        series.records.len(),
        times(&series.area_minima),
        times(&series.entropy_minima)
    );
    for f in &outcome.files {
        println!("  wrote {}", f.display());
    }
    Ok(())
}
