//! Truncated Fock-space states: initial-state builders, density matrices and
//! ladder-operator expectation values.
//!
//! Every builder evaluates amplitudes in log space and renormalizes after
//! truncation, so a state built at cutoff `dim` always has unit norm.

use std::f64::consts::PI;

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::numerics::{laguerre, ln_factorials};

/// Pure state `Σ_n C_n |n⟩` truncated to `n < dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amplitudes: Array1<Complex64>,
}

impl FockVector {
    /// Renormalizes `amplitudes` to unit norm.
    pub fn normalized(amplitudes: Array1<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(invalid("Fock vector needs dim >= 1"));
        }
        if amplitudes.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(invalid("non-finite Fock amplitude"));
        }
        let norm = amplitudes.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(invalid("Fock vector has zero norm"));
        }
        Ok(Self {
            amplitudes: amplitudes.mapv(|c| c / norm),
        })
    }

    /// Number state `|n⟩` in a space of dimension `dim`.
    pub fn basis(dim: usize, n: usize) -> Result<Self> {
        if n >= dim {
            return Err(invalid(format!("Fock index {n} outside dim {dim}")));
        }
        let mut amplitudes = Array1::zeros(dim);
        amplitudes[n] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &Array1<Complex64> {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(n, c)| n as f64 * c.norm_sqr())
            .sum()
    }
}

/// Photon-number populations and the mass sitting near the cutoff.
pub trait Populations {
    fn populations(&self) -> Vec<f64>;

    /// `Σ_{n ≥ k} p_n`.
    fn tail_mass(&self, k: usize) -> f64 {
        self.populations().iter().skip(k).sum()
    }
}

impl Populations for FockVector {
    fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }
}

/// Density matrix `ρ = Σ ρ_{nm} |n⟩⟨m|` on a truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    elements: Array2<Complex64>,
}

impl DensityMatrix {
    /// Wraps a Hermitian, unit-trace matrix.
    pub fn from_elements(elements: Array2<Complex64>) -> Result<Self> {
        let (rows, cols) = elements.dim();
        if rows != cols || rows == 0 {
            return Err(invalid(format!("density matrix must be square and non-empty, got {rows}x{cols}")));
        }
        if elements.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(invalid("non-finite density-matrix element"));
        }
        let rho = Self { elements };
        let herm = rho.hermiticity_deviation();
        if herm > 1e-10 {
            return Err(invalid(format!("matrix is not Hermitian (deviation {herm:.3e})")));
        }
        let drift = (rho.trace() - 1.0).abs();
        if drift > 1e-10 {
            return Err(invalid(format!("trace differs from 1 by {drift:.3e}")));
        }
        Ok(rho)
    }

    pub(crate) fn from_elements_unchecked(elements: Array2<Complex64>) -> Self {
        debug_assert_eq!(elements.nrows(), elements.ncols());
        Self { elements }
    }

    pub fn from_pure(psi: &FockVector) -> Self {
        let c = psi.amplitudes();
        let dim = c.len();
        let elements = Array2::from_shape_fn((dim, dim), |(n, m)| c[n] * c[m].conj());
        Self { elements }
    }

    /// `|n⟩⟨n|`.
    pub fn fock(dim: usize, n: usize) -> Result<Self> {
        Ok(Self::from_pure(&FockVector::basis(dim, n)?))
    }

    pub fn vacuum(dim: usize) -> Self {
        Self::fock(dim.max(1), 0).expect("index 0 is always in range")
    }

    pub fn dim(&self) -> usize {
        self.elements.nrows()
    }

    pub fn elements(&self) -> &Array2<Complex64> {
        &self.elements
    }

    pub fn into_elements(self) -> Array2<Complex64> {
        self.elements
    }

    pub fn get(&self, n: usize, m: usize) -> Complex64 {
        self.elements[[n, m]]
    }

    pub fn trace(&self) -> f64 {
        self.elements.diag().iter().map(|c| c.re).sum()
    }

    /// `Tr ρ²`, using Hermiticity: `Σ |ρ_{nm}|²`.
    pub fn purity(&self) -> f64 {
        self.elements.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for n in 0..dim {
            for m in n..dim {
                let d = (self.elements[[n, m]] - self.elements[[m, n]].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Largest element-wise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        self.elements
            .iter()
            .zip(other.elements.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Phase-space rotation `ρ_{nm} → e^{-i(n-m)φ} ρ_{nm}`.
    pub fn rotated(&self, phi: f64) -> Self {
        let elements = Array2::from_shape_fn(self.elements.dim(), |(n, m)| {
            self.elements[[n, m]] * Complex64::from_polar(1.0, -((n as f64) - (m as f64)) * phi)
        });
        Self { elements }
    }

    /// Population of the Fock state `|n⟩`; the vacuum fidelity for `n = 0`.
    pub fn population(&self, n: usize) -> f64 {
        self.elements[[n, n]].re
    }
}

impl Populations for DensityMatrix {
    fn populations(&self) -> Vec<f64> {
        self.elements.diag().iter().map(|c| c.re).collect()
    }
}

pub fn density_from_pure(psi: &FockVector) -> DensityMatrix {
    DensityMatrix::from_pure(psi)
}

fn check_alpha(alpha: Complex64) -> Result<()> {
    if alpha.re.is_finite() && alpha.im.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("non-finite coherent amplitude {alpha}")))
    }
}

/// Fills `C_n = exp(ln_mag(n)) · e^{i (n − first) arg α}` for `n ≥ first`, zero below.
fn log_space_amplitudes(
    dim: usize,
    first: usize,
    alpha: Complex64,
    ln_mag: impl Fn(usize) -> f64,
) -> Array1<Complex64> {
    let arg = alpha.arg();
    Array1::from_shape_fn(dim, |n| {
        if n < first {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::from_polar(ln_mag(n).exp(), (n - first) as f64 * arg)
        }
    })
}

/// Coherent state `C_n = e^{-|α|²/2} α^n / √n!`, renormalized after truncation.
pub fn coherent_coefficients(alpha: Complex64, dim: usize) -> Result<FockVector> {
    check_alpha(alpha)?;
    if dim < 1 {
        return Err(invalid("coherent state needs dim >= 1"));
    }
    if alpha.norm() == 0.0 {
        return FockVector::basis(dim, 0);
    }
    let intensity = alpha.norm_sqr();
    let ln_abs = alpha.norm().ln();
    let lnf = ln_factorials(dim);
    let amps = log_space_amplitudes(dim, 0, alpha, |n| {
        -0.5 * intensity + n as f64 * ln_abs - 0.5 * lnf[n]
    });
    FockVector::normalized(amps)
}

/// `p`-photon-added coherent state `N (a†)^p |α⟩`:
/// `C_n = e^{-|α|²/2} α^{n-p} √(n!) / ((n-p)! √(p! L_p(-|α|²)))` for `n ≥ p`.
pub fn photon_added_coefficients(alpha: Complex64, p: usize, dim: usize) -> Result<FockVector> {
    check_alpha(alpha)?;
    if p == 0 {
        return Err(invalid("photon-added state needs p >= 1"));
    }
    if p >= dim {
        return Err(invalid(format!("photon number p={p} does not fit in dim {dim}")));
    }
    if alpha.norm() == 0.0 {
        return FockVector::basis(dim, p);
    }
    let intensity = alpha.norm_sqr();
    let ln_abs = alpha.norm().ln();
    let lnf = ln_factorials(dim);
    let ln_norm = 0.5 * (lnf[p] + laguerre(p, -intensity).ln());
    let amps = log_space_amplitudes(dim, p, alpha, |n| {
        -0.5 * intensity + (n - p) as f64 * ln_abs + 0.5 * lnf[n] - lnf[n - p] - ln_norm
    });
    FockVector::normalized(amps)
}

/// Even coherent state `N_+ (|α⟩ + |−α⟩)`; odd amplitudes are exactly zero.
pub fn even_coherent_coefficients(alpha: Complex64, dim: usize) -> Result<FockVector> {
    check_alpha(alpha)?;
    if dim < 2 {
        return Err(invalid("even coherent state needs dim >= 2"));
    }
    let mut amps = coherent_coefficients(alpha, dim)?.amplitudes;
    for (n, c) in amps.iter_mut().enumerate() {
        if n % 2 == 1 {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    FockVector::normalized(amps)
}

/// `N_+` fixed by normalizing the truncated even-coherent expansion.
pub fn even_coherent_normalization(alpha: Complex64, dim: usize) -> Result<f64> {
    check_alpha(alpha)?;
    let intensity = alpha.norm_sqr();
    let lnf = ln_factorials(dim);
    let sum: f64 = (0..dim)
        .step_by(2)
        .map(|n| {
            let ln_term = if n == 0 {
                -intensity
            } else {
                -intensity + n as f64 * intensity.ln() - lnf[n]
            };
            ln_term.exp()
        })
        .sum();
    Ok(0.5 / sum.sqrt())
}

/// `⟨a⟩`, `⟨a²⟩` and `⟨N⟩` of a density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderExpectations {
    pub a: Complex64,
    pub a2: Complex64,
    pub number: f64,
}

pub fn ladder_expectations(rho: &DensityMatrix) -> LadderExpectations {
    let dim = rho.dim();
    let el = rho.elements();
    let mut a = Complex64::new(0.0, 0.0);
    let mut a2 = Complex64::new(0.0, 0.0);
    let mut number = 0.0;
    for n in 0..dim {
        number += n as f64 * el[[n, n]].re;
        if n + 1 < dim {
            a += ((n + 1) as f64).sqrt() * el[[n + 1, n]];
        }
        if n + 2 < dim {
            a2 += (((n + 1) * (n + 2)) as f64).sqrt() * el[[n + 2, n]];
        }
    }
    LadderExpectations { a, a2, number }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateKind {
    Coherent,
    PhotonAdded,
    EvenCoherent,
}

impl StateKind {
    pub fn name(self) -> &'static str {
        match self {
            StateKind::Coherent => "coherent",
            StateKind::PhotonAdded => "photon_added",
            StateKind::EvenCoherent => "even_coherent",
        }
    }
}

impl std::str::FromStr for StateKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "coherent" => Ok(StateKind::Coherent),
            "photon_added" => Ok(StateKind::PhotonAdded),
            "even_coherent" => Ok(StateKind::EvenCoherent),
            other => Err(invalid(format!("unknown state kind `{other}`"))),
        }
    }
}

/// One of the three initial states, parameterized by `α = |α| e^{iδ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialStateSpec {
    kind: StateKind,
    alpha: Complex64,
    photons_added: usize,
}

impl InitialStateSpec {
    pub fn new(kind: StateKind, alpha: Complex64, photons_added: usize) -> Result<Self> {
        check_alpha(alpha)?;
        if kind == StateKind::PhotonAdded && photons_added == 0 {
            return Err(invalid("photon-added state needs p >= 1"));
        }
        Ok(Self {
            kind,
            alpha,
            photons_added,
        })
    }

    /// Builds the spec from the field strength `|α|²` and phase `δ`.
    pub fn from_intensity(kind: StateKind, alpha_sq: f64, delta: f64, photons_added: usize) -> Result<Self> {
        if !(alpha_sq.is_finite() && alpha_sq >= 0.0 && delta.is_finite()) {
            return Err(invalid(format!("bad field strength |alpha|^2={alpha_sq}, delta={delta}")));
        }
        Self::new(kind, Complex64::from_polar(alpha_sq.sqrt(), delta), photons_added)
    }

    pub fn kind(&self) -> StateKind {
        self.kind
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn photons_added(&self) -> usize {
        self.photons_added
    }

    pub fn build(&self, dim: usize) -> Result<FockVector> {
        match self.kind {
            StateKind::Coherent => coherent_coefficients(self.alpha, dim),
            StateKind::PhotonAdded => photon_added_coefficients(self.alpha, self.photons_added, dim),
            StateKind::EvenCoherent => even_coherent_coefficients(self.alpha, dim),
        }
    }

    pub fn density(&self, dim: usize) -> Result<DensityMatrix> {
        Ok(DensityMatrix::from_pure(&self.build(dim)?))
    }
}

/// `N_+ = [2(1 + e^{-2|α|²})]^{-1/2}` for the untruncated even coherent state.
pub fn even_coherent_normalization_closed_form(alpha: Complex64) -> f64 {
    1.0 / (2.0 * (1.0 + (-2.0 * alpha.norm_sqr()).exp())).sqrt()
}

/// Ground-state quadrature peak `π^{-1/4}`.
pub(crate) fn pi_quarter() -> f64 {
    PI.powf(-0.25)
}
