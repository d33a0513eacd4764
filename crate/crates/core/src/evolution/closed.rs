//! Element-wise closed-form propagators.

use ndarray::Array2;
use num_complex::Complex64;

use super::MediumSpec;
use crate::fock::DensityMatrix;

/// `ρ_{nm}(t) = e^{−i(φ(n)−φ(m))t} ρ_{nm}(0)`.
pub fn propagate_unitary(rho0: &DensityMatrix, medium: &MediumSpec, t: f64) -> DensityMatrix {
    let el = rho0.elements();
    let out = Array2::from_shape_fn(el.dim(), |(n, m)| el[[n, m]] * medium.free_phase(n, m, t));
    DensityMatrix::from_elements_unchecked(out)
}

/// Pure dephasing: `ρ_{nm}(t) = e^{−i(φ(n)−φ(m))t} e^{−γ(n−m)²t/2} ρ_{nm}(0)`.
pub fn propagate_phase_damping(rho0: &DensityMatrix, medium: &MediumSpec, gamma: f64, t: f64) -> DensityMatrix {
    debug_assert!(gamma >= 0.0 && t >= 0.0);
    let el = rho0.elements();
    let out = Array2::from_shape_fn(el.dim(), |(n, m)| {
        if n == m {
            return el[[n, n]];
        }
        let d = n as f64 - m as f64;
        el[[n, m]] * medium.free_phase(n, m, t) * (-0.5 * gamma * d * d * t).exp()
    });
    DensityMatrix::from_elements_unchecked(out)
}

/// Weight attached to the `k`-photon-loss term of the factorized
/// amplitude-damping solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KrausWeight {
    /// `√(C(n+k,k) C(m+k,k)) (1−e^{−γt})^k`; trace preserving.
    TracePreserving,
    /// The same with an extra `1/k!`; leaks probability for `k ≥ 2`.
    ExtraFactorial,
}

/// Factorized amplitude-damping solution
/// `ρ_{nm}(t) = e^{−iΔφ t} e^{−γ(n+m)t/2} Σ_k √(C(n+k,k)C(m+k,k)) (1−e^{−γt})^k ρ_{n+k,m+k}(0)`.
///
/// Exact for populations; off-diagonal elements ignore the differing
/// nonlinear phases of the states feeding them.
pub fn propagate_amplitude_damping_closed(
    rho0: &DensityMatrix,
    medium: &MediumSpec,
    gamma: f64,
    t: f64,
) -> DensityMatrix {
    propagate_amplitude_damping_weighted(rho0, medium, gamma, t, KrausWeight::TracePreserving)
}

pub fn propagate_amplitude_damping_weighted(
    rho0: &DensityMatrix,
    medium: &MediumSpec,
    gamma: f64,
    t: f64,
    weight: KrausWeight,
) -> DensityMatrix {
    debug_assert!(gamma >= 0.0 && t >= 0.0);
    let dim = rho0.dim();
    let el = rho0.elements();
    let survive = (-gamma * t).exp();
    let loss = -(-gamma * t).exp_m1();
    let mut out = Array2::<Complex64>::zeros((dim, dim));
    for n in 0..dim {
        for m in 0..=n {
            let mut acc = el[[n, m]];
            let mut w = 1.0;
            for k in 1..dim - n {
                let kf = k as f64;
                w *= loss * (((n + k) * (m + k)) as f64).sqrt() / kf;
                if weight == KrausWeight::ExtraFactorial {
                    w /= kf;
                }
                if w == 0.0 {
                    break;
                }
                acc += el[[n + k, m + k]] * w;
            }
            let decay = survive.powf(0.5 * (n + m) as f64);
            let v = acc * decay * medium.free_phase(n, m, t);
            out[[n, m]] = v;
            if n != m {
                out[[m, n]] = v.conj();
            }
        }
    }
    DensityMatrix::from_elements_unchecked(out)
}
