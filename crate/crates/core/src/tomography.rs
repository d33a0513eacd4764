//! Optical tomograms `ω(x, θ) = ⟨x, θ|ρ|x, θ⟩` with
//! `⟨x, θ|n⟩ = ψ_n(x) e^{−inθ}`, where `ψ_n` are the normalized Hermite functions.

use std::f64::consts::{PI, TAU};
use std::io::{self, Write};

use ndarray::{Array1, Array2, Axis};
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::fock::{pi_quarter, DensityMatrix, FockVector};
use crate::numerics::{format_sig, trapezoid};

/// Uniform quadrature axis `x_i`, `i = 0..n`, with both ends included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XAxis {
    min: f64,
    max: f64,
    n: usize,
}

impl XAxis {
    pub fn new(min: f64, max: f64, n: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || min >= max {
            return Err(invalid(format!("quadrature range needs x_min < x_max, got [{min}, {max}]")));
        }
        if n < 2 {
            return Err(invalid("quadrature axis needs at least 2 points"));
        }
        Ok(Self { min, max, n })
    }

    /// `[−x_max, x_max]`.
    pub fn symmetric(x_max: f64, n: usize) -> Result<Self> {
        Self::new(-x_max, x_max, n)
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.n - 1) as f64
    }

    // weighted form keeps x_{n-1-i} = -x_i bit-exact on symmetric ranges
    pub fn point(&self, i: usize) -> f64 {
        let last = (self.n - 1) as f64;
        (self.min * (last - i as f64) + self.max * i as f64) / last
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.point(i)).collect()
    }
}

impl Default for XAxis {
    fn default() -> Self {
        Self {
            min: -10.0,
            max: 10.0,
            n: 200,
        }
    }
}

/// Quadrature axis together with a set of local-oscillator phases.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    x: XAxis,
    thetas: Vec<f64>,
}

impl QuadratureGrid {
    pub fn new(x: XAxis, thetas: Vec<f64>) -> Result<Self> {
        if thetas.is_empty() {
            return Err(invalid("quadrature grid needs at least one phase"));
        }
        if thetas.iter().any(|t| !(0.0..TAU).contains(t)) {
            return Err(invalid("phases must lie in [0, 2π)"));
        }
        if thetas.windows(2).any(|w| w[1] <= w[0]) {
            return Err(invalid("phases must be strictly increasing"));
        }
        Ok(Self { x, thetas })
    }

    /// `count` equally spaced phases `2πk/count`.
    pub fn uniform(x: XAxis, count: usize) -> Result<Self> {
        if count == 0 {
            return Err(invalid("phase count must be positive"));
        }
        Self::new(x, uniform_thetas(count))
    }

    pub fn x(&self) -> &XAxis {
        &self.x
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }
}

pub fn uniform_thetas(count: usize) -> Vec<f64> {
    (0..count).map(|k| TAU * k as f64 / count as f64).collect()
}

/// `ψ_0(x), …, ψ_{dim−1}(x)` by the normalized three-term recurrence.
pub fn hermite_functions(dim: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; dim];
    if dim == 0 {
        return out;
    }
    out[0] = pi_quarter() * (-0.5 * x * x).exp();
    if dim > 1 {
        out[1] = std::f64::consts::SQRT_2 * x * out[0];
    }
    for n in 2..dim {
        let nf = n as f64;
        out[n] = x * (2.0 / nf).sqrt() * out[n - 1] - ((nf - 1.0) / nf).sqrt() * out[n - 2];
    }
    out
}

/// `⟨x, θ|n⟩` for `n < dim`.
pub fn quadrature_basis(dim: usize, x: f64, theta: f64) -> Array1<Complex64> {
    let psi = hermite_functions(dim, x);
    Array1::from_shape_fn(dim, |n| psi[n] * Complex64::from_polar(1.0, -(n as f64) * theta))
}

/// Evaluates tomogram slices for a fixed axis and truncation, reusing the
/// Hermite-function table across states.
#[derive(Debug, Clone)]
pub struct Tomographer {
    axis: XAxis,
    // [n_x, dim]
    table: Array2<f64>,
}

impl Tomographer {
    pub fn new(axis: XAxis, dim: usize) -> Self {
        let mut table = Array2::zeros((axis.len(), dim));
        for (i, mut row) in table.axis_iter_mut(Axis(0)).enumerate() {
            row.assign(&Array1::from(hermite_functions(dim, axis.point(i))));
        }
        Self { axis, table }
    }

    pub fn axis(&self) -> &XAxis {
        &self.axis
    }

    pub fn dim(&self) -> usize {
        self.table.ncols()
    }

    /// `ω(x_i, θ)` for every axis point.
    pub fn slice(&self, rho: &DensityMatrix, theta: f64) -> Vec<f64> {
        assert_eq!(rho.dim(), self.dim(), "state and tomographer truncations differ");
        let el = rho.elements();
        let rotated = Array2::from_shape_fn(el.dim(), |(n, m)| {
            (el[[n, m]] * Complex64::from_polar(1.0, -(n as f64 - m as f64) * theta)).re
        });
        let left = self.table.dot(&rotated);
        left.axis_iter(Axis(0))
            .zip(self.table.axis_iter(Axis(0)))
            .map(|(a, b)| a.dot(&b))
            .collect()
    }

    /// `|⟨x_i, θ|ψ⟩|²`, linear in `dim` per point.
    pub fn slice_pure(&self, psi: &FockVector, theta: f64) -> Vec<f64> {
        assert_eq!(psi.dim(), self.dim(), "state and tomographer truncations differ");
        let rotated: Vec<Complex64> = psi
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(n, c)| c * Complex64::from_polar(1.0, -(n as f64) * theta))
            .collect();
        self.table
            .axis_iter(Axis(0))
            .map(|row| {
                let amp: Complex64 = row.iter().zip(&rotated).map(|(p, c)| c * *p).sum();
                amp.norm_sqr()
            })
            .collect()
    }

    pub fn tomogram(&self, rho: &DensityMatrix, thetas: &[f64]) -> Tomogram {
        self.assemble(thetas, |theta| self.slice(rho, theta))
    }

    pub fn tomogram_pure(&self, psi: &FockVector, thetas: &[f64]) -> Tomogram {
        self.assemble(thetas, |theta| self.slice_pure(psi, theta))
    }

    fn assemble(&self, thetas: &[f64], slice: impl Fn(f64) -> Vec<f64>) -> Tomogram {
        let mut values = Array2::zeros((thetas.len(), self.axis.len()));
        for (k, &theta) in thetas.iter().enumerate() {
            values.row_mut(k).assign(&Array1::from(slice(theta)));
        }
        Tomogram {
            axis: self.axis,
            thetas: thetas.to_vec(),
            values,
        }
    }
}

pub fn tomogram_of_density(rho: &DensityMatrix, grid: &QuadratureGrid) -> Tomogram {
    Tomographer::new(*grid.x(), rho.dim()).tomogram(rho, grid.thetas())
}

pub fn tomogram_of_pure(psi: &FockVector, grid: &QuadratureGrid) -> Tomogram {
    Tomographer::new(*grid.x(), psi.dim()).tomogram_pure(psi, grid.thetas())
}

/// Sampled `ω(x, θ)`; row `k` holds the slice at `thetas[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tomogram {
    axis: XAxis,
    thetas: Vec<f64>,
    values: Array2<f64>,
}

impl Tomogram {
    pub fn axis(&self) -> &XAxis {
        &self.axis
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn slice(&self, theta_index: usize) -> &[f64] {
        let row = self.values.row(theta_index);
        row.to_slice().expect("tomogram rows are contiguous")
    }

    /// Trapezoid integral of the slice over `x`.
    pub fn normalization(&self, theta_index: usize) -> f64 {
        trapezoid(self.slice(theta_index), self.axis.spacing())
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Fails on the first slice whose integral is off by more than `tol`.
    pub fn check_normalization(&self, tol: f64) -> Result<()> {
        for (k, &theta) in self.thetas.iter().enumerate() {
            let deviation = self.normalization(k) - 1.0;
            if deviation.abs() > tol {
                return Err(Error::Normalization { theta, deviation });
            }
        }
        Ok(())
    }

    /// Writes `# theta x omega` then one row per point, `θ` outer and `x` inner.
    pub fn write_dump<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "# theta x omega")?;
        let xs = self.axis.points();
        for (k, &theta) in self.thetas.iter().enumerate() {
            let th = format_sig(theta, 9);
            for (x, w) in xs.iter().zip(self.values.row(k)) {
                writeln!(out, "{th} {} {}", format_sig(*x, 12), format_sig(*w, 12))?;
            }
        }
        Ok(())
    }
}

/// `e^{−x²}/√π`, the ground-state slice.
pub fn vacuum_density(x: f64) -> f64 {
    (-x * x).exp() / PI.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{coherent_coefficients, even_coherent_coefficients, InitialStateSpec, StateKind};
    use approx::assert_abs_diff_eq;

    #[test]
    fn ground_state_peak() {
        let u = quadrature_basis(3, 0.0, 1.234);
        assert_abs_diff_eq!(u[0].re, 0.7511255444649425, epsilon = 1e-15);
        assert_abs_diff_eq!(u[0].im, 0.0, epsilon = 1e-15);
        assert_eq!(u[1].norm(), 0.0);
    }

    fn gram(axis: XAxis, dim: usize) -> Array2<f64> {
        let tomo = Tomographer::new(axis, dim);
        let weighted = Array2::from_shape_fn(tomo.table.dim(), |(i, n)| {
            let w = if i == 0 || i + 1 == axis.len() { 0.5 } else { 1.0 };
            tomo.table[[i, n]] * w * axis.spacing()
        });
        weighted.t().dot(&tomo.table)
    }

    #[test]
    fn hermite_functions_are_orthonormal() {
        let g = gram(XAxis::symmetric(18.0, 480).unwrap(), 101);
        for n in 0..101 {
            for m in 0..101 {
                let expect = if n == m { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(g[[n, m]], expect, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn default_axis_holds_low_orders_only() {
        // ψ_n reaches out to √(2n+1), past x = 10 once n > 49
        let g = gram(XAxis::default(), 101);
        for n in 0..=37 {
            assert_abs_diff_eq!(g[[n, n]], 1.0, epsilon = 1e-6);
        }
        assert!(g[[50, 50]] < 0.96);
        assert!(g[[100, 100]] < 0.5);
    }

    #[test]
    fn hermite_matches_explicit_low_orders() {
        for &x in &[-2.5, -0.3, 0.0, 1.1, 4.0] {
            let psi = hermite_functions(4, x);
            let g = pi_quarter() * (-0.5 * x * x).exp();
            assert_abs_diff_eq!(psi[2], g * (2.0 * x * x - 1.0) / 2f64.sqrt(), epsilon = 1e-14);
            assert_abs_diff_eq!(psi[3], g * (2.0 * x * x * x - 3.0 * x) / 3f64.sqrt(), epsilon = 1e-14);
        }
    }

    #[test]
    fn symmetric_axis_is_exactly_antisymmetric() {
        let axis = XAxis::default();
        let xs = axis.points();
        for i in 0..xs.len() {
            assert_eq!(xs[i], -xs[xs.len() - 1 - i]);
        }
        assert_eq!(xs[0], -10.0);
        assert_eq!(xs[199], 10.0);
    }

    #[test]
    fn grid_validation() {
        let x = XAxis::default();
        assert!(XAxis::new(1.0, 1.0, 10).is_err());
        assert!(XAxis::new(-1.0, 1.0, 1).is_err());
        assert!(QuadratureGrid::new(x, vec![0.5, 0.5]).is_err());
        assert!(QuadratureGrid::new(x, vec![TAU]).is_err());
        assert!(QuadratureGrid::new(x, vec![]).is_err());
        assert_eq!(QuadratureGrid::uniform(x, 4).unwrap().thetas(), &[0.0, PI / 2.0, PI, 1.5 * PI]);
    }

    #[test]
    fn vacuum_tomogram() {
        let grid = QuadratureGrid::uniform(XAxis::default(), 8).unwrap();
        let tomo = tomogram_of_density(&DensityMatrix::vacuum(10), &grid);
        for (k, _) in grid.thetas().iter().enumerate() {
            for (x, w) in grid.x().points().iter().zip(tomo.slice(k)) {
                assert_abs_diff_eq!(*w, vacuum_density(*x), epsilon = 1e-15);
            }
        }
        tomo.check_normalization(1e-10).unwrap();
    }

    #[test]
    fn coherent_tomogram_is_shifted_gaussian() {
        let alpha = Complex64::from_polar(10f64.sqrt(), 0.7);
        let psi = coherent_coefficients(alpha, 60).unwrap();
        let grid = QuadratureGrid::uniform(XAxis::default(), 6).unwrap();
        let tomo = tomogram_of_pure(&psi, &grid);
        for (k, &theta) in grid.thetas().iter().enumerate() {
            let centre = 2f64.sqrt() * alpha.norm() * (0.7 - theta).cos();
            for (x, w) in grid.x().points().iter().zip(tomo.slice(k)) {
                assert_abs_diff_eq!(*w, vacuum_density(x - centre), epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn single_photon_tomogram() {
        let psi = FockVector::basis(5, 1).unwrap();
        let grid = QuadratureGrid::uniform(XAxis::default(), 5).unwrap();
        let tomo = tomogram_of_pure(&psi, &grid);
        for k in 0..5 {
            for (x, w) in grid.x().points().iter().zip(tomo.slice(k)) {
                assert_abs_diff_eq!(*w, 2.0 * x * x * vacuum_density(*x), epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn reflection_and_parity() {
        let rho = InitialStateSpec::from_intensity(StateKind::PhotonAdded, 3.0, 0.5, 2)
            .unwrap()
            .density(40)
            .unwrap();
        let grid = QuadratureGrid::uniform(XAxis::default(), 16).unwrap();
        let tomo = tomogram_of_density(&rho, &grid);
        for k in 0..8 {
            let a = tomo.slice(k);
            let b = tomo.slice(k + 8);
            for i in 0..200 {
                assert_abs_diff_eq!(a[i], b[199 - i], epsilon = 1e-12);
            }
        }

        let cat = even_coherent_coefficients(Complex64::new(10f64.sqrt(), 0.0), 60).unwrap();
        let tomo = tomogram_of_pure(&cat, &grid);
        for k in 0..16 {
            let s = tomo.slice(k);
            for i in 0..200 {
                assert_abs_diff_eq!(s[i], s[199 - i], epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn periodic_in_theta() {
        let rho = InitialStateSpec::from_intensity(StateKind::EvenCoherent, 4.0, 0.2, 0)
            .unwrap()
            .density(40)
            .unwrap();
        let t = Tomographer::new(XAxis::default(), 40);
        let a = t.slice(&rho, 0.3);
        let b = t.slice(&rho, 0.3 + TAU);
        for (x, y) in a.iter().zip(&b) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-12);
        }
    }

    #[test]
    fn pure_and_density_paths_agree() {
        let psi = coherent_coefficients(Complex64::new(10f64.sqrt(), 0.0), 60).unwrap();
        let rho = DensityMatrix::from_pure(&psi);
        let grid = QuadratureGrid::uniform(XAxis::default(), 12).unwrap();
        let a = tomogram_of_pure(&psi, &grid);
        let b = tomogram_of_density(&rho, &grid);
        for (x, y) in a.values().iter().zip(b.values()) {
            assert_abs_diff_eq!(x, y, epsilon = 1e-12);
        }
        a.check_normalization(1e-6).unwrap();
        assert!(a.min_value() >= -1e-12);
    }

    #[test]
    fn normalization_failure_is_reported() {
        let psi = coherent_coefficients(Complex64::new(7.0, 0.0), 100).unwrap();
        let grid = QuadratureGrid::uniform(XAxis::symmetric(5.0, 100).unwrap(), 1).unwrap();
        let err = tomogram_of_pure(&psi, &grid).check_normalization(1e-4).unwrap_err();
        assert!(matches!(err, Error::Normalization { .. }));
    }

    #[test]
    fn dump_layout() {
        let grid = QuadratureGrid::new(XAxis::new(-1.0, 1.0, 3).unwrap(), vec![0.0, PI / 2.0]).unwrap();
        let tomo = tomogram_of_density(&DensityMatrix::vacuum(2), &grid);
        let mut buf = Vec::new();
        tomo.write_dump(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 7);
        assert_eq!(lines[0], "# theta x omega");
        assert!(lines[1].starts_with("0 -1 0.20755374"));
        assert!(lines[4].starts_with("1.57079633 -1 "));
        assert_eq!(lines[5].split(' ').count(), 3);
    }
}
