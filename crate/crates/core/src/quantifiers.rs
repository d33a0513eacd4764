//! Homodyne nonclassical area, tomographic entropies and minima detection.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2, TAU};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::fock::{ladder_expectations, DensityMatrix, LadderExpectations};
use crate::numerics::trapezoid;
use crate::tomography::{uniform_thetas, Tomogram, Tomographer, XAxis};

/// `1 + ln π`, the entropic uncertainty bound for conjugate quadratures.
pub fn entropy_bound() -> f64 {
    1.0 + PI.ln()
}

/// Slices below this are treated as exactly zero in `ω ln ω`.
pub const OMEGA_FLOOR: f64 = 1e-30;

/// Slices whose integral is further than this from 1 signal a bad range or truncation.
pub const SLICE_NORMALIZATION_TOL: f64 = 1e-4;

pub const DEFAULT_THETA_COUNT: usize = 128;

fn quadrature_moments(ladder: &LadderExpectations, theta: f64) -> (f64, f64) {
    let mean = SQRT_2 * (Complex64::from_polar(1.0, -theta) * ladder.a).re;
    let second = ladder.number + 0.5 + (Complex64::from_polar(1.0, -2.0 * theta) * ladder.a2).re;
    (mean, second - mean * mean)
}

/// `(⟨X_θ⟩, Var X_θ)` from `⟨a⟩`, `⟨a²⟩` and `⟨N⟩`.
pub fn quadrature_mean_and_variance_analytic(rho: &DensityMatrix, theta: f64) -> (f64, f64) {
    quadrature_moments(&ladder_expectations(rho), theta)
}

/// `∫ xᵏ ω(x, θ_j) dx` by the trapezoid rule.
pub fn quadrature_moments_from_tomogram(tomo: &Tomogram, theta_index: usize, order: u32) -> f64 {
    moment(tomo.axis(), tomo.slice(theta_index), order)
}

fn moment(axis: &XAxis, slice: &[f64], order: u32) -> f64 {
    let integrand: Vec<f64> = slice
        .iter()
        .enumerate()
        .map(|(i, w)| axis.point(i).powi(order as i32) * w)
        .collect();
    trapezoid(&integrand, axis.spacing())
}

/// How the quadrature spread entering the nonclassical area is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum AreaPath {
    /// From ladder-operator expectations; no grid error.
    #[default]
    Analytic,
    /// From first and second moments of tomogram slices on this axis.
    Tomographic(XAxis),
}

/// `∫₀^{2π} ΔX_θ dθ − √2π` by the periodic trapezoid rule on `theta_count` phases.
pub fn nonclassical_area(rho: &DensityMatrix, theta_count: usize, path: AreaPath) -> Result<f64> {
    if theta_count < 16 {
        return Err(invalid(format!("area integral needs at least 16 phases, got {theta_count}")));
    }
    let thetas = uniform_thetas(theta_count);
    let spreads: Vec<f64> = match path {
        AreaPath::Analytic => {
            let ladder = ladder_expectations(rho);
            thetas.iter().map(|&th| quadrature_moments(&ladder, th).1.sqrt()).collect()
        }
        AreaPath::Tomographic(axis) => {
            let tomographer = Tomographer::new(axis, rho.dim());
            thetas
                .iter()
                .map(|&th| {
                    let slice = tomographer.slice(rho, th);
                    let mean = moment(&axis, &slice, 1);
                    (moment(&axis, &slice, 2) - mean * mean).sqrt()
                })
                .collect()
        }
    };
    let integral = spreads.iter().sum::<f64>() * (TAU / theta_count as f64);
    Ok(integral - SQRT_2 * PI)
}

/// `−∫ ω ln ω dx` over one slice.
pub fn slice_entropy(slice: &[f64], dx: f64) -> f64 {
    let integrand: Vec<f64> = slice
        .iter()
        .map(|&w| if w < OMEGA_FLOOR { 0.0 } else { -w * w.ln() })
        .collect();
    trapezoid(&integrand, dx)
}

pub fn tomographic_entropy(tomo: &Tomogram, theta_index: usize) -> f64 {
    slice_entropy(tomo.slice(theta_index), tomo.axis().spacing())
}

/// `S(θ)` and `S(θ + π/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyPair {
    pub theta: f64,
    pub first: f64,
    pub second: f64,
}

impl EntropyPair {
    pub fn sum(&self) -> f64 {
        self.first + self.second
    }

    /// Evaluates both slices, failing if either is badly normalized.
    pub fn evaluate(tomographer: &Tomographer, rho: &DensityMatrix, theta: f64) -> Result<Self> {
        let dx = tomographer.axis().spacing();
        let mut out = [0.0; 2];
        for (slot, th) in out.iter_mut().zip([theta, theta + FRAC_PI_2]) {
            let slice = tomographer.slice(rho, th);
            let deviation = trapezoid(&slice, dx) - 1.0;
            if deviation.abs() > SLICE_NORMALIZATION_TOL {
                return Err(Error::Normalization { theta: th, deviation });
            }
            *slot = slice_entropy(&slice, dx);
        }
        Ok(Self {
            theta,
            first: out[0],
            second: out[1],
        })
    }
}

/// `S(θ) + S(θ + π/2)` on the given axis.
pub fn entropy_sum(rho: &DensityMatrix, axis: XAxis, theta: f64) -> Result<f64> {
    EntropyPair::evaluate(&Tomographer::new(axis, rho.dim()), rho, theta).map(|p| p.sum())
}

/// Indices of strict interior minima whose depth below the lower of the two
/// flanking maxima exceeds `prominence`.
pub fn local_minima_indices(values: &[f64], prominence: f64) -> Vec<usize> {
    let n = values.len();
    let mut out = Vec::new();
    if n < 3 {
        return out;
    }
    for i in 1..n - 1 {
        let v = values[i];
        if !(v < values[i - 1] && v < values[i + 1]) {
            continue;
        }
        let left = values[..i].iter().rev().take_while(|&&w| w >= v).fold(v, |a, &w| a.max(w));
        let right = values[i + 1..].iter().take_while(|&&w| w >= v).fold(v, |a, &w| a.max(w));
        if left.min(right) - v > prominence {
            out.push(i);
        }
    }
    out
}

/// Times of the prominent local minima of a uniformly sampled `(t, value)` series.
pub fn find_local_minima(series: &[(f64, f64)], prominence: f64) -> Vec<f64> {
    let values: Vec<f64> = series.iter().map(|&(_, v)| v).collect();
    local_minima_indices(&values, prominence)
        .into_iter()
        .map(|i| series[i].0)
        .collect()
}

/// One row of a quantifier time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantifierRecord {
    pub t: f64,
    pub t_over_trev: f64,
    pub nonclassical_area: f64,
    pub entropy_0: f64,
    pub entropy_90: f64,
    pub entropy_sum: f64,
    pub trace: f64,
    pub purity: f64,
}

/// Settings shared by every record of a series.
#[derive(Debug, Clone)]
pub struct QuantifierEvaluator {
    tomographer: Tomographer,
    theta_count: usize,
    area_path: AreaPath,
    entropy_theta: f64,
}

impl QuantifierEvaluator {
    pub fn new(axis: XAxis, dim: usize, theta_count: usize, area_path: AreaPath, entropy_theta: f64) -> Result<Self> {
        if theta_count < 16 {
            return Err(invalid(format!("area integral needs at least 16 phases, got {theta_count}")));
        }
        Ok(Self {
            tomographer: Tomographer::new(axis, dim),
            theta_count,
            area_path,
            entropy_theta,
        })
    }

    pub fn tomographer(&self) -> &Tomographer {
        &self.tomographer
    }

    pub fn record(&self, rho: &DensityMatrix, t: f64, t_rev: f64) -> Result<QuantifierRecord> {
        let area = nonclassical_area(rho, self.theta_count, self.area_path)?;
        let pair = EntropyPair::evaluate(&self.tomographer, rho, self.entropy_theta)?;
        Ok(QuantifierRecord {
            t,
            t_over_trev: t / t_rev,
            nonclassical_area: area,
            entropy_0: pair.first,
            entropy_90: pair.second,
            entropy_sum: pair.sum(),
            trace: rho.trace(),
            purity: rho.purity(),
        })
    }
}
