//! Time evolution of a density matrix in a Kerr or cubic medium, optionally
//! under zero-temperature amplitude damping (`L = a`) or phase damping
//! (`L = N`), both entering the master equation with rate `γ`:
//!
//! ```text
//! dρ/dt = −i[H, ρ] + (γ/2)(2 L ρ L† − L†L ρ − ρ L†L)
//! ```
//!
//! Closed-form propagators evaluate `ρ(t)` directly from `ρ(0)`; the RK4
//! integrator in [`master`] is an independent oracle for them.

pub mod closed;
pub mod exact;
pub mod master;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::fock::DensityMatrix;

pub use closed::{
    propagate_amplitude_damping_closed, propagate_amplitude_damping_weighted, propagate_phase_damping,
    propagate_unitary, KrausWeight,
};
pub use exact::coherence_block_solve;
pub use master::{default_substeps, integrate_master, lindblad_rhs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MediumKind {
    /// `H = χ N(N−1)`
    Kerr,
    /// `H = χ N(N−1)(N−2)`
    Cubic,
}

impl std::str::FromStr for MediumKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kerr" => Ok(MediumKind::Kerr),
            "cubic" => Ok(MediumKind::Cubic),
            other => Err(invalid(format!("unknown medium `{other}`"))),
        }
    }
}

impl MediumKind {
    pub fn name(self) -> &'static str {
        match self {
            MediumKind::Kerr => "kerr",
            MediumKind::Cubic => "cubic",
        }
    }
}

/// Nonlinear medium with susceptibility `χ > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumSpec {
    kind: MediumKind,
    chi: f64,
}

impl MediumSpec {
    pub fn new(kind: MediumKind, chi: f64) -> Result<Self> {
        if !(chi.is_finite() && chi > 0.0) {
            return Err(invalid(format!("susceptibility must be positive, got {chi}")));
        }
        Ok(Self { kind, chi })
    }

    pub fn kerr(chi: f64) -> Result<Self> {
        Self::new(MediumKind::Kerr, chi)
    }

    pub fn cubic(chi: f64) -> Result<Self> {
        Self::new(MediumKind::Cubic, chi)
    }

    pub fn kind(&self) -> MediumKind {
        self.kind
    }

    pub fn chi(&self) -> f64 {
        self.chi
    }

    /// Integer spectrum `n(n−1)` or `n(n−1)(n−2)`; the energy of `|n⟩` is `χ` times this.
    pub fn level_index(&self, n: usize) -> i64 {
        let n = n as i64;
        match self.kind {
            MediumKind::Kerr => n * (n - 1),
            MediumKind::Cubic => n * (n - 1) * (n - 2),
        }
    }

    /// Energy `φ(n)` of the Fock state `|n⟩`.
    pub fn energy(&self, n: usize) -> f64 {
        self.chi * self.level_index(n) as f64
    }

    /// `e^{−i(φ(n)−φ(m))t}`. The integer level difference is formed first so
    /// revival phases stay exact multiples of `χt`.
    pub fn free_phase(&self, n: usize, m: usize, t: f64) -> Complex64 {
        let diff = self.level_index(n) - self.level_index(m);
        if diff == 0 {
            return Complex64::new(1.0, 0.0);
        }
        Complex64::from_polar(1.0, -(diff as f64) * (self.chi * t))
    }

    /// `T_rev = π/χ`.
    pub fn revival_time(&self) -> f64 {
        revival_time(self)
    }
}

pub fn revival_time(medium: &MediumSpec) -> f64 {
    PI / medium.chi
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DampingChannel {
    None,
    Amplitude,
    Phase,
}

impl std::str::FromStr for DampingChannel {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(DampingChannel::None),
            "amplitude" => Ok(DampingChannel::Amplitude),
            "phase" => Ok(DampingChannel::Phase),
            other => Err(invalid(format!("unknown damping channel `{other}`"))),
        }
    }
}

impl DampingChannel {
    pub fn name(self) -> &'static str {
        match self {
            DampingChannel::None => "none",
            DampingChannel::Amplitude => "amplitude",
            DampingChannel::Phase => "phase",
        }
    }
}

/// Damping channel and coupling `γ`; `γ = 0` exactly when the channel is `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampingSpec {
    channel: DampingChannel,
    gamma: f64,
}

impl DampingSpec {
    pub fn new(channel: DampingChannel, gamma: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(invalid(format!("damping rate must be finite and >= 0, got {gamma}")));
        }
        match (channel, gamma == 0.0) {
            (DampingChannel::None, false) => Err(invalid("channel `none` requires gamma = 0")),
            (DampingChannel::Amplitude | DampingChannel::Phase, true) => {
                Err(invalid("a damping channel requires gamma > 0"))
            }
            _ => Ok(Self { channel, gamma }),
        }
    }

    pub fn none() -> Self {
        Self {
            channel: DampingChannel::None,
            gamma: 0.0,
        }
    }

    pub fn amplitude(gamma: f64) -> Result<Self> {
        Self::new(DampingChannel::Amplitude, gamma)
    }

    pub fn phase(gamma: f64) -> Result<Self> {
        Self::new(DampingChannel::Phase, gamma)
    }

    pub fn channel(&self) -> DampingChannel {
        self.channel
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// `steps + 1` uniform samples covering `[t_start, t_end]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_start: f64,
    t_end: f64,
    steps: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, steps: usize) -> Result<Self> {
        if !(t_start.is_finite() && t_end.is_finite()) || t_start < 0.0 || t_end <= t_start {
            return Err(invalid(format!("time grid needs t_end > t_start >= 0, got [{t_start}, {t_end}]")));
        }
        if steps == 0 {
            return Err(invalid("time grid needs at least one step"));
        }
        Ok(Self { t_start, t_end, steps })
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn step(&self) -> f64 {
        (self.t_end - self.t_start) / self.steps as f64
    }

    pub fn len(&self) -> usize {
        self.steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn time(&self, k: usize) -> f64 {
        if k == self.steps {
            return self.t_end;
        }
        self.t_start + (self.t_end - self.t_start) * (k as f64 / self.steps as f64)
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.time(k)).collect()
    }
}

/// Which amplitude-damping solution a [`Propagator`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum AmplitudeSolver {
    /// Exact solution of the master equation, block by coherence order.
    #[default]
    Exact,
    /// Factorized free-phase × binomial-loss form (exact on the diagonal only).
    Factorized,
}

impl std::str::FromStr for AmplitudeSolver {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(AmplitudeSolver::Exact),
            "factorized" | "closed_form" => Ok(AmplitudeSolver::Factorized),
            other => Err(invalid(format!("unknown amplitude solver `{other}`"))),
        }
    }
}

impl AmplitudeSolver {
    pub fn name(self) -> &'static str {
        match self {
            AmplitudeSolver::Exact => "exact",
            AmplitudeSolver::Factorized => "factorized",
        }
    }
}

/// Dispatches to the closed-form propagator matching a medium and channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Propagator {
    pub medium: MediumSpec,
    pub damping: DampingSpec,
    pub solver: AmplitudeSolver,
}

impl Propagator {
    pub fn new(medium: MediumSpec, damping: DampingSpec, solver: AmplitudeSolver) -> Self {
        Self { medium, damping, solver }
    }

    /// `ρ(t)` computed directly from `ρ(0)`.
    pub fn propagate(&self, rho0: &DensityMatrix, t: f64) -> DensityMatrix {
        let gamma = self.damping.gamma();
        match self.damping.channel() {
            DampingChannel::None => propagate_unitary(rho0, &self.medium, t),
            DampingChannel::Phase => propagate_phase_damping(rho0, &self.medium, gamma, t),
            DampingChannel::Amplitude => match self.solver {
                AmplitudeSolver::Exact => coherence_block_solve(rho0, &self.medium, gamma, t),
                AmplitudeSolver::Factorized => {
                    propagate_amplitude_damping_closed(rho0, &self.medium, gamma, t)
                }
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn revival_times() {
        assert_abs_diff_eq!(MediumSpec::kerr(5.0).unwrap().revival_time(), 0.6283185, epsilon = 1e-7);
        assert_abs_diff_eq!(MediumSpec::cubic(PI).unwrap().revival_time(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(MediumSpec::kerr(1.0).unwrap().revival_time(), PI, epsilon = 1e-15);
    }

    #[test]
    fn medium_rejects_nonpositive_chi() {
        assert!(MediumSpec::kerr(0.0).is_err());
        assert!(MediumSpec::cubic(-1.0).is_err());
        assert!(MediumSpec::kerr(f64::NAN).is_err());
    }

    #[test]
    fn level_indices() {
        let kerr = MediumSpec::kerr(5.0).unwrap();
        let cubic = MediumSpec::cubic(5.0).unwrap();
        assert_eq!((0..5).map(|n| kerr.level_index(n)).collect::<Vec<_>>(), vec![0, 0, 2, 6, 12]);
        assert_eq!((0..5).map(|n| cubic.level_index(n)).collect::<Vec<_>>(), vec![0, 0, 0, 6, 24]);
    }

    #[test]
    fn damping_gamma_iff_channel() {
        assert!(DampingSpec::new(DampingChannel::None, 0.1).is_err());
        assert!(DampingSpec::new(DampingChannel::Amplitude, 0.0).is_err());
        assert!(DampingSpec::new(DampingChannel::Phase, -0.1).is_err());
        assert!(DampingSpec::new(DampingChannel::Phase, 0.1).is_ok());
        assert_eq!(DampingSpec::none().gamma(), 0.0);
    }

    #[test]
    fn time_grid_samples() {
        let g = TimeGrid::new(0.0, 1.0, 4).unwrap();
        assert_eq!(g.times(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(TimeGrid::new(1.0, 1.0, 4).is_err());
        assert!(TimeGrid::new(-1.0, 1.0, 4).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 0).is_err());
    }
}
