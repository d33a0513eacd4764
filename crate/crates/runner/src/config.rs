//! Flat `key = value` experiment configuration.
//!
//! Blank lines and lines starting with `#` are ignored. Recognised keys:
//!
//! | key | default | meaning |
//! |-----|---------|---------|
//! | `state.kind` | required | `coherent`, `photon_added` or `even_coherent` |
//! | `state.alpha_sq` | required | field strength `|α|²` |
//! | `state.delta` | `0` | phase of `α` |
//! | `state.p` | required for `photon_added` | photons added |
//! | `medium.kind` | `kerr` | `kerr` or `cubic` |
//! | `medium.chi` | `5` | susceptibility |
//! | `damping.channel` | `none` | `none`, `amplitude` or `phase` |
//! | `damping.gamma` | `0` | coupling rate |
//! | `sim.dim` | required | Fock cutoff |
//! | `sim.t_end_over_trev` / `sim.t_end` | one required | end of the sweep |
//! | `sim.t_start_over_trev` / `sim.t_start` | `0` | start of the sweep |
//! | `sim.steps` | `500` | intervals; `steps + 1` samples |
//! | `sim.allow_truncation` | `false` | skip the cutoff tail check |
//! | `grid.x_max` | `10` | quadrature range end |
//! | `grid.x_min` | `-grid.x_max` | quadrature range start |
//! | `grid.n_x` | `200` | quadrature points |
//! | `grid.theta_count` | `128` | phases in the area integral |
//! | `entropy.theta` | `0` | first phase of the entropy pair |
//! | `area.path` | `analytic` | `analytic` or `tomographic` |
//! | `solver.amplitude` | `exact` | `exact` or `factorized` |
//! | `minima.prominence` | `1e-3` | minima detector threshold |
//! | `out.dir` | `.` | output directory |
//! | `out.name` | `run` | file stem |
//! | `out.quantifiers` | `true` | write the quantifier CSV |
//! | `out.minima` | `false` | write the minima report |
//! | `out.tomograms_over_trev` / `out.tomograms_gamma_t` | none | comma list of dump times |
//! | `out.tomogram_theta_count` | `64` | phases per tomogram dump |

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use tomodyn::evolution::DampingChannel;
use tomodyn::quantifiers::DEFAULT_THETA_COUNT;
use tomodyn::{
    AmplitudeSolver, AreaPath, DampingSpec, InitialStateSpec, MediumKind, MediumSpec, StateKind, TimeGrid, XAxis,
};

use crate::RunError;

const KNOWN_KEYS: &[&str] = &[
    "state.kind",
    "state.alpha_sq",
    "state.delta",
    "state.p",
    "medium.kind",
    "medium.chi",
    "damping.channel",
    "damping.gamma",
    "sim.dim",
    "sim.t_end_over_trev",
    "sim.t_end",
    "sim.t_start_over_trev",
    "sim.t_start",
    "sim.steps",
    "sim.allow_truncation",
    "grid.x_max",
    "grid.x_min",
    "grid.n_x",
    "grid.theta_count",
    "entropy.theta",
    "area.path",
    "solver.amplitude",
    "minima.prominence",
    "out.dir",
    "out.name",
    "out.quantifiers",
    "out.minima",
    "out.tomograms_over_trev",
    "out.tomograms_gamma_t",
    "out.tomogram_theta_count",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AreaPathKind {
    Analytic,
    Tomographic,
}

/// A requested tomogram dump.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub dir: PathBuf,
    pub name: String,
    pub quantifiers: bool,
    pub minima: bool,
    pub snapshots: Vec<Snapshot>,
    pub tomogram_theta_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub state: InitialStateSpec,
    pub medium: MediumSpec,
    pub damping: DampingSpec,
    pub dim: usize,
    pub time: TimeGrid,
    pub allow_truncation: bool,
    pub axis: XAxis,
    pub theta_count: usize,
    pub area_path: AreaPathKind,
    pub entropy_theta: f64,
    pub solver: AmplitudeSolver,
    pub prominence: f64,
    pub output: OutputSpec,
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, RunError> {
        let mut raw = Raw::parse(text)?;
        let config = raw.build()?;
        if let Some(key) = raw.map.keys().find(|k| !raw.used.contains(k.as_str())) {
            return Err(RunError::Validation(format!("key `{key}` does not apply to this configuration")));
        }
        Ok(config)
    }

    pub fn revival_time(&self) -> f64 {
        self.medium.revival_time()
    }

    pub fn area_path(&self) -> AreaPath {
        match self.area_path {
            AreaPathKind::Analytic => AreaPath::Analytic,
            AreaPathKind::Tomographic => AreaPath::Tomographic(self.axis),
        }
    }

    /// Same experiment at a different cutoff.
    pub fn with_dim(&self, dim: usize) -> Self {
        Self { dim, ..self.clone() }
    }
}

struct Raw {
    map: BTreeMap<String, String>,
    used: std::collections::BTreeSet<&'static str>,
}

impl Raw {
    fn parse(text: &str) -> Result<Self, RunError> {
        let mut map = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| RunError::Validation(format!("line {}: expected `key = value`", lineno + 1)))?;
            let key = key.trim();
            if !KNOWN_KEYS.contains(&key) {
                return Err(RunError::Validation(format!("line {}: unknown key `{key}`", lineno + 1)));
            }
            if map.insert(key.to_string(), value.trim().to_string()).is_some() {
                return Err(RunError::Validation(format!("line {}: duplicate key `{key}`", lineno + 1)));
            }
        }
        Ok(Self {
            map,
            used: Default::default(),
        })
    }

    fn get(&mut self, key: &'static str) -> Option<String> {
        let v = self.map.get(key).cloned();
        if v.is_some() {
            self.used.insert(key);
        }
        v
    }

    fn parsed<T: FromStr>(&mut self, key: &'static str) -> Result<Option<T>, RunError>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|v| v.parse::<T>().map_err(|e| RunError::Validation(format!("`{key}` = `{v}`: {e}"))))
            .transpose()
    }

    fn required<T: FromStr>(&mut self, key: &'static str) -> Result<T, RunError>
    where
        T::Err: std::fmt::Display,
    {
        self.parsed(key)?
            .ok_or_else(|| RunError::Validation(format!("missing required key `{key}`")))
    }

    fn real(&mut self, key: &'static str) -> Result<Option<f64>, RunError> {
        match self.parsed::<f64>(key)? {
            Some(v) if !v.is_finite() => Err(RunError::Validation(format!("`{key}` must be finite"))),
            other => Ok(other),
        }
    }

    fn list(&mut self, key: &'static str) -> Result<Option<Vec<f64>>, RunError> {
        let Some(v) = self.get(key) else {
            return Ok(None);
        };
        v.split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| RunError::Validation(format!("`{key}`: bad entry `{}`", s.trim())))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Some)
    }

    fn either(&mut self, a: &'static str, b: &'static str) -> Result<Option<(bool, f64)>, RunError> {
        match (self.real(a)?, self.real(b)?) {
            (Some(_), Some(_)) => Err(RunError::Validation(format!("set only one of `{a}` and `{b}`"))),
            (Some(x), None) => Ok(Some((true, x))),
            (None, Some(x)) => Ok(Some((false, x))),
            (None, None) => Ok(None),
        }
    }

    fn build(&mut self) -> Result<ExperimentConfig, RunError> {
        let kind: StateKind = self.required("state.kind")?;
        let alpha_sq = self.real("state.alpha_sq")?.ok_or_else(|| missing("state.alpha_sq"))?;
        let delta = self.real("state.delta")?.unwrap_or(0.0);
        let p = if kind == StateKind::PhotonAdded {
            self.required::<usize>("state.p")?
        } else {
            0
        };
        let state = InitialStateSpec::from_intensity(kind, alpha_sq, delta, p)?;

        let medium_kind: MediumKind = self.parsed("medium.kind")?.unwrap_or(MediumKind::Kerr);
        let chi = self.real("medium.chi")?.unwrap_or(5.0);
        let medium = MediumSpec::new(medium_kind, chi)?;
        let channel: DampingChannel = self.parsed("damping.channel")?.unwrap_or(DampingChannel::None);
        let gamma = self.real("damping.gamma")?.unwrap_or(0.0);
        let damping = DampingSpec::new(channel, gamma)?;

        let dim: usize = self.required("sim.dim")?;
        if dim < 2 {
            return Err(RunError::Validation(format!("`sim.dim` must be at least 2, got {dim}")));
        }
        let t_rev = medium.revival_time();
        let absolute = |(over_trev, v): (bool, f64)| if over_trev { v * t_rev } else { v };
        let t_end = self
            .either("sim.t_end_over_trev", "sim.t_end")?
            .map(absolute)
            .ok_or_else(|| missing("sim.t_end_over_trev"))?;
        let t_start = self
            .either("sim.t_start_over_trev", "sim.t_start")?
            .map(absolute)
            .unwrap_or(0.0);
        let steps: usize = self.parsed("sim.steps")?.unwrap_or(500);
        let time = TimeGrid::new(t_start, t_end, steps)?;
        let allow_truncation: bool = self.parsed("sim.allow_truncation")?.unwrap_or(false);

        let x_max = self.real("grid.x_max")?.unwrap_or(10.0);
        let x_min = self.real("grid.x_min")?.unwrap_or(-x_max);
        let n_x: usize = self.parsed("grid.n_x")?.unwrap_or(200);
        let axis = XAxis::new(x_min, x_max, n_x)?;
        let theta_count: usize = self.parsed("grid.theta_count")?.unwrap_or(DEFAULT_THETA_COUNT);
        if theta_count < 16 {
            return Err(RunError::Validation(format!("`grid.theta_count` must be at least 16, got {theta_count}")));
        }
        let entropy_theta = self.real("entropy.theta")?.unwrap_or(0.0);
        let area_path = match self.get("area.path").as_deref() {
            None | Some("analytic") => AreaPathKind::Analytic,
            Some("tomographic") => AreaPathKind::Tomographic,
            Some(other) => return Err(RunError::Validation(format!("unknown area path `{other}`"))),
        };
        let solver: AmplitudeSolver = self.parsed("solver.amplitude")?.unwrap_or_default();
        let prominence = self.real("minima.prominence")?.unwrap_or(1e-3);
        if prominence < 0.0 {
            return Err(RunError::Validation("`minima.prominence` must be >= 0".into()));
        }

        let snapshots = match (self.list("out.tomograms_over_trev")?, self.list("out.tomograms_gamma_t")?) {
            (Some(_), Some(_)) => {
                return Err(RunError::Validation(
                    "set only one of `out.tomograms_over_trev` and `out.tomograms_gamma_t`".into(),
                ))
            }
            (Some(xs), None) => xs
                .into_iter()
                .map(|x| Snapshot {
                    t: x * t_rev,
                    label: format!("trev{x}"),
                })
                .collect(),
            (None, Some(xs)) => {
                if gamma == 0.0 {
                    return Err(RunError::Validation("`out.tomograms_gamma_t` needs damping.gamma > 0".into()));
                }
                xs.into_iter()
                    .map(|x| Snapshot {
                        t: x / gamma,
                        label: format!("gt{x}"),
                    })
                    .collect()
            }
            (None, None) => Vec::new(),
        };
        if let Some(s) = snapshots.iter().find(|s| s.t < 0.0) {
            return Err(RunError::Validation(format!("negative tomogram time `{}`", s.label)));
        }
        let output = OutputSpec {
            dir: self.get("out.dir").map(PathBuf::from).unwrap_or_else(|| PathBuf::from(".")),
            name: self.get("out.name").unwrap_or_else(|| "run".into()),
            quantifiers: self.parsed("out.quantifiers")?.unwrap_or(true),
            minima: self.parsed("out.minima")?.unwrap_or(false),
            snapshots,
            tomogram_theta_count: self.parsed("out.tomogram_theta_count")?.unwrap_or(64),
        };
        if output.name.is_empty() || output.name.contains(['/', '\\']) {
            return Err(RunError::Validation(format!("bad output name `{}`", output.name)));
        }
        if output.tomogram_theta_count == 0 {
            return Err(RunError::Validation("`out.tomogram_theta_count` must be positive".into()));
        }

        Ok(ExperimentConfig {
            state,
            medium,
            damping,
            dim,
            time,
            allow_truncation,
            axis,
            theta_count,
            area_path,
            entropy_theta,
            solver,
            prominence,
            output,
        })
    }
}

fn missing(key: &str) -> RunError {
    RunError::Validation(format!("missing required key `{key}`"))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "state.kind = coherent\nstate.alpha_sq = 10\nsim.dim = 60\nsim.t_end_over_trev = 1\n";

    #[test]
    fn defaults() {
        let c = ExperimentConfig::parse(MINIMAL).unwrap();
        assert_eq!(c.medium, MediumSpec::kerr(5.0).unwrap());
        assert_eq!(c.damping, DampingSpec::none());
        assert_eq!(c.time.steps(), 500);
        assert_eq!(c.time.t_end(), c.revival_time());
        assert_eq!(c.axis, XAxis::default());
        assert_eq!(c.theta_count, 128);
        assert_eq!(c.solver, AmplitudeSolver::Exact);
        assert_eq!(c.output.name, "run");
        assert!(c.output.quantifiers && !c.output.minima);
    }

    #[test]
    fn full_config() {
        let text = "# cubic damping run\n\
            state.kind = photon_added\nstate.alpha_sq = 5\nstate.p = 3\nstate.delta = 0.5\n\
            medium.kind = cubic\nmedium.chi = 2\n\
            damping.channel = amplitude\ndamping.gamma = 0.1\n\n\
            sim.dim = 60\nsim.t_end = 100\nsim.steps = 199\n\
            grid.x_max = 12\ngrid.n_x = 240\ngrid.theta_count = 64\n\
            area.path = tomographic\nsolver.amplitude = factorized\nminima.prominence = 0.01\n\
            out.dir = /tmp/x\nout.name = fig13\nout.minima = true\n\
            out.tomograms_gamma_t = 0.01, 0.1, 1, 10\n";
        let c = ExperimentConfig::parse(text).unwrap();
        assert_eq!(c.state.photons_added(), 3);
        assert_eq!(c.medium.kind(), MediumKind::Cubic);
        assert_eq!(c.damping.gamma(), 0.1);
        assert_eq!(c.time.t_end(), 100.0);
        assert_eq!(c.axis.min(), -12.0);
        assert_eq!(c.area_path, AreaPathKind::Tomographic);
        assert_eq!(c.solver, AmplitudeSolver::Factorized);
        for (s, expect) in c.output.snapshots.iter().zip([0.1, 1.0, 10.0, 100.0]) {
            assert!((s.t - expect).abs() < 1e-12);
        }
        assert_eq!(c.output.snapshots[0].label, "gt0.01");
    }

    #[test]
    fn rejects_bad_input() {
        for bad in [
            "state.kind = squeezed\nstate.alpha_sq = 1\nsim.dim = 10\nsim.t_end = 1\n",
            "state.kind = coherent\nsim.dim = 10\nsim.t_end = 1\n",
            "state.kind = photon_added\nstate.alpha_sq = 1\nsim.dim = 10\nsim.t_end = 1\n",
            "state.kind = coherent\nstate.alpha_sq = 1\nsim.dim = 10\nsim.t_end = 1\nsim.t_end_over_trev = 1\n",
            "state.kind = coherent\nstate.alpha_sq = 1\nsim.dim = 1\nsim.t_end = 1\n",
            "state.kind = coherent\nstate.alpha_sq = 1\nsim.dim = 10\nsim.t_end = 1\nfoo.bar = 2\n",
            "state.kind = coherent\nstate.alpha_sq = 1\nstate.alpha_sq = 2\nsim.dim = 10\nsim.t_end = 1\n",
            "state.kind = coherent\nstate.alpha_sq = 1\nsim.dim = 10\nsim.t_end = 1\ndamping.gamma = 0.1\n",
            "state.kind = coherent\nstate.alpha_sq = 1\nsim.dim = 10\nsim.t_end = 1\ndamping.channel = phase\n",
            "state.kind = coherent\nstate.alpha_sq = nan\nsim.dim = 10\nsim.t_end = 1\n",
            "state.kind = coherent\nstate.alpha_sq = 1\nsim.dim = 10\nsim.t_end = 1\ngrid.theta_count = 8\n",
            "state.kind = coherent\nstate.alpha_sq = 1\nsim.dim = 10\nsim.t_end = 1\nno equals sign\n",
            "state.kind = coherent\nstate.alpha_sq = 1\nsim.dim = 10\nsim.t_end = 1\nout.tomograms_gamma_t = 1\n",
        ] {
            assert!(
                matches!(ExperimentConfig::parse(bad), Err(RunError::Validation(_))),
                "accepted:\n{bad}"
            );
        }
    }

    #[test]
    fn photon_count_ignored_keys_are_rejected() {
        let text = format!("{MINIMAL}state.p = 3\n");
        assert!(ExperimentConfig::parse(&text).is_err());
    }
}
