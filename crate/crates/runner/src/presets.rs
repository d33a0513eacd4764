//! Built-in experiment catalog, `fig1` to `fig20`.
//!
//! Time axes are in units of `T_rev`, except the long-time damping entries
//! which fix `γ = 0.1` and sweep `t ∈ [0, 100]`, i.e. `γt ∈ [0, 10]`.

use std::path::Path;

use crate::config::ExperimentConfig;
use crate::RunError;

#[derive(Debug, Clone)]
pub struct PresetRun {
    pub label: String,
    pub text: String,
}

impl PresetRun {
    /// Parsed configuration writing into `out_dir`.
    pub fn config(&self, out_dir: &Path) -> Result<ExperimentConfig, RunError> {
        let mut config = ExperimentConfig::parse(&self.text)?;
        config.output.dir = out_dir.to_path_buf();
        Ok(config)
    }
}

#[derive(Debug, Clone)]
pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub runs: Vec<PresetRun>,
}

#[derive(Clone, Copy)]
enum State {
    Coherent,
    PhotonAdded,
    Even,
}

impl State {
    const ALL: [State; 3] = [State::Coherent, State::PhotonAdded, State::Even];

    fn label(self) -> &'static str {
        match self {
            State::Coherent => "coherent",
            State::PhotonAdded => "pac3",
            State::Even => "even",
        }
    }

    fn keys(self) -> &'static str {
        match self {
            State::Coherent => "state.kind = coherent\n",
            State::PhotonAdded => "state.kind = photon_added\nstate.p = 3\n",
            State::Even => "state.kind = even_coherent\n",
        }
    }
}

#[derive(Clone, Copy)]
enum Sweep {
    /// `[0, f·T_rev]` with the given number of steps.
    Trev(f64, usize),
    /// `γ = 0.1`, `t ∈ [0, 100]`, 200 samples.
    GammaT,
}

struct Spec {
    medium: &'static str,
    channel: &'static str,
    gamma: f64,
    alpha_sq: f64,
    dim: usize,
    sweep: Sweep,
    extra: &'static str,
}

impl Spec {
    fn text(&self, name: &str, state: State, alpha_sq: f64, label: &str) -> String {
        let gamma = match self.sweep {
            Sweep::GammaT if self.channel != "none" => 0.1,
            _ => self.gamma,
        };
        let mut s = format!(
            "# preset {name}, run {label}\n{}state.alpha_sq = {alpha_sq}\nmedium.kind = {}\nmedium.chi = 5\n\
             damping.channel = {}\ndamping.gamma = {gamma}\nsim.dim = {}\n",
            state.keys(),
            self.medium,
            self.channel,
            self.dim,
        );
        match self.sweep {
            Sweep::Trev(f, steps) => s += &format!("sim.t_end_over_trev = {f}\nsim.steps = {steps}\n"),
            Sweep::GammaT => s += "sim.t_end = 100\nsim.steps = 199\n",
        }
        // strong fields reach past |x| = 10; keep the spacing, widen the axis
        if alpha_sq > 30.0 {
            s += "grid.x_max = 14\ngrid.n_x = 280\n";
        } else if alpha_sq >= 20.0 {
            s += "grid.x_max = 12\ngrid.n_x = 240\n";
        }
        s += self.extra;
        s += &format!("out.name = {name}_{label}\nout.minima = true\n");
        s
    }

    fn three_states(&self, name: &str) -> Vec<PresetRun> {
        State::ALL
            .iter()
            .map(|&st| PresetRun {
                label: st.label().to_string(),
                text: self.text(name, st, self.alpha_sq, st.label()),
            })
            .collect()
    }

    fn field_strengths(&self, name: &str, values: &[f64]) -> Vec<PresetRun> {
        values
            .iter()
            .map(|&a| {
                let label = format!("coherent_a{a}");
                PresetRun {
                    text: self.text(name, State::Coherent, a, &label),
                    label,
                }
            })
            .collect()
    }

    fn single(&self, name: &str, state: State) -> Vec<PresetRun> {
        vec![PresetRun {
            label: state.label().to_string(),
            text: self.text(name, state, self.alpha_sq, state.label()),
        }]
    }
}

const fn spec(medium: &'static str, channel: &'static str, gamma: f64, alpha_sq: f64, dim: usize, sweep: Sweep) -> Spec {
    Spec {
        medium,
        channel,
        gamma,
        alpha_sq,
        dim,
        sweep,
        extra: "",
    }
}

const FULL: Sweep = Sweep::Trev(1.0, 500);
const ENTROPY: Sweep = Sweep::Trev(0.55, 700);
const DUMPS: &str = "out.tomograms_gamma_t = 0.01, 0.1, 1, 10\n";

pub const NAMES: [&str; 20] = [
    "fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10", "fig11", "fig12", "fig13",
    "fig14", "fig15", "fig16", "fig17", "fig18", "fig19", "fig20",
];

pub fn preset(name: &str) -> Option<Preset> {
    let (summary, runs): (&'static str, Vec<PresetRun>) = match name {
        "fig1" => ("Kerr, no damping, |α|²=10: area over one revival", spec("kerr", "none", 0.0, 10.0, 60, FULL).three_states(name)),
        "fig2" => (
            "Kerr, no damping, coherent input at |α|² = 10, 15, 20",
            spec("kerr", "none", 0.0, 0.0, 60, FULL).field_strengths(name, &[10.0, 15.0, 20.0]),
        ),
        "fig3" => ("Kerr, amplitude damping γ=0.1, |α|²=10", spec("kerr", "amplitude", 0.1, 10.0, 60, FULL).three_states(name)),
        "fig4" => ("Kerr, amplitude damping, |α|²=5, γt up to 10", spec("kerr", "amplitude", 0.1, 5.0, 60, Sweep::GammaT).three_states(name)),
        "fig5" => ("Kerr, phase damping γ=0.1, |α|²=10", spec("kerr", "phase", 0.1, 10.0, 60, FULL).three_states(name)),
        "fig6" => ("Kerr, phase damping, |α|²=5, γt up to 10", spec("kerr", "phase", 0.1, 5.0, 60, Sweep::GammaT).three_states(name)),
        "fig7" => ("Kerr, no damping, |α|²=40: entropy sum", spec("kerr", "none", 0.0, 40.0, 100, ENTROPY).three_states(name)),
        "fig8" => ("Kerr, amplitude damping γ=0.05, |α|²=40: entropy sum", spec("kerr", "amplitude", 0.05, 40.0, 100, ENTROPY).three_states(name)),
        "fig9" => ("Kerr, phase damping γ=0.05, |α|²=40: entropy sum", spec("kerr", "phase", 0.05, 40.0, 100, ENTROPY).three_states(name)),
        "fig10" => ("cubic, no damping, |α|²=5", spec("cubic", "none", 0.0, 5.0, 60, FULL).three_states(name)),
        "fig11" => (
            "cubic, no damping, coherent input at |α|² = 5, 10",
            spec("cubic", "none", 0.0, 0.0, 60, FULL).field_strengths(name, &[5.0, 10.0]),
        ),
        "fig12" => ("cubic, amplitude damping γ=0.1, |α|²=5", spec("cubic", "amplitude", 0.1, 5.0, 60, FULL).three_states(name)),
        "fig13" => (
            "cubic, amplitude damping, 3-photon-added |α|²=5: tomograms at γt = 0.01, 0.1, 1, 10",
            Spec {
                extra: DUMPS,
                ..spec("cubic", "amplitude", 0.1, 5.0, 60, Sweep::GammaT)
            }
            .single(name, State::PhotonAdded),
        ),
        "fig14" => ("cubic, amplitude damping, |α|²=3, γt up to 10", spec("cubic", "amplitude", 0.1, 3.0, 60, Sweep::GammaT).three_states(name)),
        "fig15" => ("cubic, phase damping γ=0.1, |α|²=5", spec("cubic", "phase", 0.1, 5.0, 60, FULL).three_states(name)),
        "fig16" => (
            "cubic, phase damping, 3-photon-added |α|²=5: tomograms at γt = 0.01, 0.1, 1, 10",
            Spec {
                extra: DUMPS,
                ..spec("cubic", "phase", 0.1, 5.0, 60, Sweep::GammaT)
            }
            .single(name, State::PhotonAdded),
        ),
        "fig17" => ("cubic, phase damping, |α|²=5, γt up to 10", spec("cubic", "phase", 0.1, 5.0, 60, Sweep::GammaT).three_states(name)),
        "fig18" => ("cubic, no damping, |α|²=5: entropy sum", spec("cubic", "none", 0.0, 5.0, 70, ENTROPY).three_states(name)),
        "fig19" => ("cubic, amplitude damping γ=0.05, |α|²=5: entropy sum", spec("cubic", "amplitude", 0.05, 5.0, 70, ENTROPY).three_states(name)),
        "fig20" => ("cubic, phase damping γ=0.05, |α|²=5: entropy sum", spec("cubic", "phase", 0.05, 5.0, 70, ENTROPY).three_states(name)),
        _ => return None,
    };
    let name = NAMES.iter().copied().find(|n| *n == name)?;
    Some(Preset { name, summary, runs })
}

pub fn all() -> Vec<Preset> {
    NAMES.iter().filter_map(|n| preset(n)).collect()
}
