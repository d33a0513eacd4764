use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;
use tomodyn_runner::{convergence_sweep, ExperimentConfig};

fn tomodyn(args: &[&str], workers: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tomodyn"));
    cmd.args(args);
    match workers {
        Some(w) => cmd.env("TOMODYN_WORKERS", w),
        None => cmd.env_remove("TOMODYN_WORKERS"),
    };
    cmd.output().unwrap()
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(format!("{name}.conf"));
    fs::write(&path, format!("{body}out.dir = {}\nout.name = {name}\n", dir.display())).unwrap();
    path.to_str().unwrap().to_string()
}

const SMALL_RUN: &str = "state.kind = photon_added\nstate.p = 1\nstate.alpha_sq = 2\nmedium.kind = cubic\n\
                         damping.channel = amplitude\ndamping.gamma = 0.1\nsim.dim = 25\nsim.t_end_over_trev = 0.5\n\
                         sim.steps = 40\nout.minima = true\nout.tomograms_over_trev = 0.25\n";

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let a = write_config(dir.path(), "a", SMALL_RUN);
    let b = write_config(dir.path(), "b", SMALL_RUN);
    assert!(tomodyn(&["run", &a], Some("1")).status.success());
    assert!(tomodyn(&["run", &b], None).status.success());
    for suffix in ["csv", "minima.txt", "tomo_trev0.25.txt"] {
        let x = fs::read(dir.path().join(format!("a.{suffix}"))).unwrap();
        let y = fs::read(dir.path().join(format!("b.{suffix}"))).unwrap();
        assert!(!x.is_empty());
        assert_eq!(x, y, "{suffix} differs");
    }
    let csv = fs::read_to_string(dir.path().join("a.csv")).unwrap();
    assert_eq!(csv.lines().count(), 42);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = write_config(dir.path(), "bad", "state.kind = coherent\nstate.alpha_sq = 1\nsim.dim = 10\nsim.t_end = 1\nbogus = 3\n");
    let out = tomodyn(&["run", &bad], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));

    let missing = dir.path().join("nope.conf");
    assert_eq!(tomodyn(&["run", missing.to_str().unwrap()], None).status.code(), Some(1));

    let narrow = write_config(
        dir.path(),
        "narrow",
        "state.kind = coherent\nstate.alpha_sq = 2\nsim.dim = 20\nsim.t_end = 1\nsim.steps = 2\ngrid.x_max = 2\ngrid.n_x = 40\n",
    );
    assert_eq!(tomodyn(&["run", &narrow], None).status.code(), Some(3));

    assert_eq!(tomodyn(&["preset", "fig99"], None).status.code(), Some(2));
    assert_eq!(tomodyn(&["run", &narrow], Some("zero")).status.code(), Some(2));
}

#[test]
fn preset_listing() {
    let out = tomodyn(&["presets"], None);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 20);
    assert!(text.lines().next().unwrap().starts_with("fig1 "));
}

#[test]
fn oracle_subcommand() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "oracle",
        "state.kind = even_coherent\nstate.alpha_sq = 1\nmedium.kind = cubic\ndamping.channel = amplitude\n\
         damping.gamma = 0.2\nsim.dim = 15\nsim.t_end_over_trev = 1\nsim.steps = 10\n",
    );
    let out = tomodyn(&["oracle", &cfg], None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 13);
    assert!(text.contains("max diagonal"));
}

#[test]
fn converge_subcommand_exit_status() {
    let dir = TempDir::new().unwrap();
    let cfg = write_config(
        dir.path(),
        "conv",
        "state.kind = coherent\nstate.alpha_sq = 1\nsim.dim = 30\nsim.t_end_over_trev = 1\nsim.allow_truncation = true\n",
    );
    let pass = tomodyn(&["converge", &cfg, "--dims", "25,30,35"], None);
    assert!(pass.status.success());
    assert!(String::from_utf8_lossy(&pass.stdout).contains("PASS at dim 25"));
    let fail = tomodyn(&["converge", &cfg, "--dims", "4,6,8"], None);
    assert_eq!(fail.status.code(), Some(3));
}

fn kerr_coherent(alpha_sq: f64) -> ExperimentConfig {
    ExperimentConfig::parse(&format!(
        "state.kind = coherent\nstate.alpha_sq = {alpha_sq}\nsim.dim = 40\nsim.t_end_over_trev = 1\nsim.allow_truncation = true\n"
    ))
    .unwrap()
}

#[test]
fn cutoff_sweep_moderate_field() {
    let report = convergence_sweep(&kerr_coherent(10.0), &[40, 50, 60]).unwrap();
    let d = report.converged.expect("sweep converges");
    assert!(d == 40 || d == 50, "{report}");
}

#[test]
fn cutoff_sweep_strong_field() {
    let report = convergence_sweep(&kerr_coherent(40.0), &[80, 90, 100, 110]).unwrap();
    assert_eq!(report.converged, Some(100), "{report}");
    let short = convergence_sweep(&kerr_coherent(40.0), &[80, 90, 100]).unwrap();
    assert!(!short.passed(), "{short}");
}
