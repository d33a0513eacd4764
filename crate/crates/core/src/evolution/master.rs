//! Fixed-step RK4 integration of the master equation with dense operators.

use ndarray::Array2;
use num_complex::Complex64;

use super::{DampingChannel, DampingSpec, MediumSpec};
use crate::error::{Error, Result};
use crate::fock::DensityMatrix;

const TRACE_DRIFT_LIMIT: f64 = 1e-8;

struct Generator {
    energies: Vec<f64>,
    gamma: f64,
    jump: Option<Array2<Complex64>>,
    jump_dag: Option<Array2<Complex64>>,
    jump_sq: Option<Array2<Complex64>>,
}

impl Generator {
    fn new(dim: usize, medium: &MediumSpec, damping: &DampingSpec) -> Self {
        let energies = (0..dim).map(|n| medium.energy(n)).collect();
        let jump = match damping.channel() {
            DampingChannel::None => None,
            DampingChannel::Amplitude => Some(Array2::from_shape_fn((dim, dim), |(i, j)| {
                if j == i + 1 {
                    Complex64::new((j as f64).sqrt(), 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })),
            DampingChannel::Phase => Some(Array2::from_shape_fn((dim, dim), |(i, j)| {
                Complex64::new(if i == j { i as f64 } else { 0.0 }, 0.0)
            })),
        };
        let jump_dag = jump.as_ref().map(|l| l.t().mapv(|z| z.conj()));
        let jump_sq = match (&jump, &jump_dag) {
            (Some(l), Some(ld)) => Some(ld.dot(l)),
            _ => None,
        };
        Self {
            energies,
            gamma: damping.gamma(),
            jump,
            jump_dag,
            jump_sq,
        }
    }

    fn apply(&self, rho: &Array2<Complex64>) -> Array2<Complex64> {
        let mut out = Array2::from_shape_fn(rho.dim(), |(n, m)| {
            Complex64::new(0.0, -(self.energies[n] - self.energies[m])) * rho[[n, m]]
        });
        if let (Some(l), Some(ld), Some(lsq)) = (&self.jump, &self.jump_dag, &self.jump_sq) {
            let sandwich = l.dot(rho).dot(ld);
            let anti = lsq.dot(rho) + rho.dot(lsq);
            out = out + (sandwich * 2.0 - anti) * (0.5 * self.gamma);
        }
        out
    }
}

/// `dρ/dt` from the master equation, built from dense `H`, `L` and `L†`.
pub fn lindblad_rhs(rho: &DensityMatrix, medium: &MediumSpec, damping: &DampingSpec) -> Array2<Complex64> {
    Generator::new(rho.dim(), medium, damping).apply(rho.elements())
}

/// Substep count for [`integrate_master`]: enough steps to cover `t` in
/// `T_rev/200` units scaled by the loss load, and never a step with
/// `h·‖generator‖ > 0.01`.
pub fn default_substeps(medium: &MediumSpec, damping: &DampingSpec, dim: usize, t: f64) -> usize {
    let gamma = damping.gamma();
    let nominal = 200.0 * (t / medium.revival_time()) * (1.0 + gamma * dim as f64);
    let top = dim.saturating_sub(1);
    // level indices are non-negative and increasing, so the top one bounds every gap
    let spread = medium.level_index(top);
    let dissipation = match damping.channel() {
        DampingChannel::None => 0.0,
        DampingChannel::Amplitude => 2.0 * gamma * top as f64,
        DampingChannel::Phase => gamma * (top * top) as f64,
    };
    let bound = medium.chi() * spread as f64 + dissipation;
    let stiff = t * bound / 0.01;
    nominal.max(stiff).ceil().max(1.0) as usize
}

/// Classical RK4 over `substeps` equal steps, symmetrized once at the end.
pub fn integrate_master(
    rho0: &DensityMatrix,
    medium: &MediumSpec,
    damping: &DampingSpec,
    t: f64,
    substeps: usize,
) -> Result<DensityMatrix> {
    let substeps = substeps.max(1);
    let generator = Generator::new(rho0.dim(), medium, damping);
    let h = t / substeps as f64;
    let mut rho = rho0.elements().clone();
    for _ in 0..substeps {
        let k1 = generator.apply(&rho);
        let k2 = generator.apply(&(&rho + &(&k1 * (0.5 * h))));
        let k3 = generator.apply(&(&rho + &(&k2 * (0.5 * h))));
        let k4 = generator.apply(&(&rho + &(&k3 * h)));
        rho = rho + (k1 + (k2 + k3) * 2.0 + k4) * (h / 6.0);
    }
    let sym = (&rho + &rho.t().mapv(|z| z.conj())) * 0.5;
    let out = DensityMatrix::from_elements_unchecked(sym);
    let drift = (out.trace() - rho0.trace()).abs();
    if drift > TRACE_DRIFT_LIMIT {
        return Err(Error::TraceDrift {
            drift,
            limit: TRACE_DRIFT_LIMIT,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::{
        coherence_block_solve, propagate_amplitude_damping_closed, propagate_phase_damping, propagate_unitary,
    };
    use crate::fock::{InitialStateSpec, StateKind};
    use approx::assert_abs_diff_eq;

    fn kerr() -> MediumSpec {
        MediumSpec::kerr(5.0).unwrap()
    }

    fn run(rho: &DensityMatrix, medium: &MediumSpec, damping: &DampingSpec, t: f64) -> DensityMatrix {
        let steps = default_substeps(medium, damping, rho.dim(), t);
        integrate_master(rho, medium, damping, t, steps).unwrap()
    }

    fn sample(kind: StateKind) -> DensityMatrix {
        InitialStateSpec::from_intensity(kind, 2.0, 0.4, 1).unwrap().density(15).unwrap()
    }

    #[test]
    fn phase_damping_keeps_diagonal_fixed() {
        let rho = sample(StateKind::Coherent);
        let d = lindblad_rhs(&rho, &kerr(), &DampingSpec::phase(0.3).unwrap());
        for n in 0..15 {
            assert!(d[[n, n]].norm() < 1e-14);
        }
    }

    #[test]
    fn vacuum_is_fixed_point_of_loss() {
        let d = lindblad_rhs(&DensityMatrix::vacuum(6), &kerr(), &DampingSpec::amplitude(0.7).unwrap());
        assert!(d.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn single_photon_rates() {
        let rho = DensityMatrix::fock(4, 1).unwrap();
        let d = lindblad_rhs(&rho, &kerr(), &DampingSpec::amplitude(1.0).unwrap());
        assert_abs_diff_eq!(d[[1, 1]].re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d[[0, 0]].re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn rhs_matches_component_equation() {
        let rho = sample(StateKind::EvenCoherent);
        let medium = MediumSpec::cubic(5.0).unwrap();
        let gamma = 0.3;
        let d = lindblad_rhs(&rho, &medium, &DampingSpec::amplitude(gamma).unwrap());
        let el = rho.elements();
        for n in 0..15 {
            for m in 0..15 {
                let rate = Complex64::new(-0.5 * gamma * (n + m) as f64, -(medium.energy(n) - medium.energy(m)));
                let mut expect = rate * el[[n, m]];
                if n + 1 < 15 && m + 1 < 15 {
                    expect += el[[n + 1, m + 1]] * gamma * (((n + 1) * (m + 1)) as f64).sqrt();
                }
                assert_abs_diff_eq!((d[[n, m]] - expect).norm(), 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn unitary_agrees_with_rk4() {
        for medium in [kerr(), MediumSpec::cubic(5.0).unwrap()] {
            let rho = sample(StateKind::PhotonAdded);
            let t = medium.revival_time() / 3.0;
            let ode = run(&rho, &medium, &DampingSpec::none(), t);
            assert!(ode.max_abs_diff(&propagate_unitary(&rho, &medium, t)) < 1e-8);
        }
    }

    #[test]
    fn phase_damping_agrees_with_rk4() {
        let rho = sample(StateKind::Coherent);
        let t = kerr().revival_time() / 3.0;
        let ode = run(&rho, &kerr(), &DampingSpec::phase(0.1).unwrap(), t);
        assert!(ode.max_abs_diff(&propagate_phase_damping(&rho, &kerr(), 0.1, t)) < 1e-8);
    }

    #[test]
    fn amplitude_damping_agrees_with_rk4() {
        for medium in [kerr(), MediumSpec::cubic(5.0).unwrap()] {
            let rho = sample(StateKind::EvenCoherent);
            let t = medium.revival_time() / 2.0;
            let ode = run(&rho, &medium, &DampingSpec::amplitude(0.1).unwrap(), t);
            let exact = coherence_block_solve(&rho, &medium, 0.1, t);
            assert!(ode.max_abs_diff(&exact) < 1e-8, "{}", ode.max_abs_diff(&exact));
            let closed = propagate_amplitude_damping_closed(&rho, &medium, 0.1, t);
            for n in 0..15 {
                assert_abs_diff_eq!(ode.population(n), closed.population(n), epsilon = 1e-8);
            }
            assert_abs_diff_eq!(ode.trace(), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn two_photon_decay_to_vacuum() {
        let rho = DensityMatrix::fock(5, 2).unwrap();
        let (gamma, t) = (1.0, 1.0);
        let ode = run(&rho, &kerr(), &DampingSpec::amplitude(gamma).unwrap(), t);
        let p = -(-gamma * t).exp_m1();
        assert_abs_diff_eq!(ode.population(0), p * p, epsilon = 1e-9);
    }

    #[test]
    fn substeps_grow_with_time_and_loss() {
        let a = default_substeps(&kerr(), &DampingSpec::none(), 15, 0.1);
        let b = default_substeps(&kerr(), &DampingSpec::none(), 15, 0.2);
        let c = default_substeps(&kerr(), &DampingSpec::amplitude(1.0).unwrap(), 15, 0.2);
        assert!(a < b && b <= c);
        assert!(default_substeps(&kerr(), &DampingSpec::none(), 15, 0.0) >= 1);
    }
}
