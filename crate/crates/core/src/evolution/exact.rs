//! Exact amplitude-damping solution.
//!
//! The master equation couples `ρ_{n,m}` only to `ρ_{n+1,m+1}`, so each
//! coherence order `d = n − m` is an independent upper-bidiagonal linear
//! system `ẋ_j = λ_j x_j + c_j x_{j+1}` with `x_j = ρ_{j+d, j}`,
//! `λ_j = −i(φ(j+d) − φ(j)) − γ(2j+d)/2` and `c_j = γ√((j+d+1)(j+1))`.
//!
//! When the `λ_j` are equally spaced (every order in a Kerr medium, the
//! population block in any medium) the propagator has a positive-term closed
//! form. Otherwise the block is exponentiated by scaling and squaring, with
//! the diagonal and first superdiagonal recomputed exactly at every squaring.

use ndarray::Array2;
use num_complex::Complex64;

use super::MediumSpec;
use crate::fock::DensityMatrix;

/// `ρ(t)` solving the amplitude-damping master equation exactly in the
/// truncated space.
pub fn coherence_block_solve(rho0: &DensityMatrix, medium: &MediumSpec, gamma: f64, t: f64) -> DensityMatrix {
    solve_blocks(rho0, medium, gamma, t, BlockMethod::Auto)
}

/// Same as [`coherence_block_solve`] but always uses the matrix exponential,
/// even where the closed form applies.
pub fn coherence_block_solve_expm(rho0: &DensityMatrix, medium: &MediumSpec, gamma: f64, t: f64) -> DensityMatrix {
    solve_blocks(rho0, medium, gamma, t, BlockMethod::Expm)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum BlockMethod {
    Auto,
    Expm,
}

fn solve_blocks(rho0: &DensityMatrix, medium: &MediumSpec, gamma: f64, t: f64, method: BlockMethod) -> DensityMatrix {
    debug_assert!(gamma >= 0.0 && t >= 0.0);
    let dim = rho0.dim();
    let el = rho0.elements();
    let mut out = Array2::<Complex64>::zeros((dim, dim));
    for d in 0..dim {
        let len = dim - d;
        let x0: Vec<Complex64> = (0..len).map(|j| el[[j + d, j]]).collect();
        let block = CoherenceBlock { medium, gamma, d };
        let x = match (method, block.uniform_step()) {
            (BlockMethod::Auto, Some(step)) => block.propagate_uniform(&x0, step, t),
            _ => block.propagate_expm(&x0, t),
        };
        for (j, v) in x.into_iter().enumerate() {
            if d == 0 {
                out[[j, j]] = Complex64::new(v.re, 0.0);
            } else {
                out[[j + d, j]] = v;
                out[[j, j + d]] = v.conj();
            }
        }
    }
    DensityMatrix::from_elements_unchecked(out)
}

struct CoherenceBlock<'a> {
    medium: &'a MediumSpec,
    gamma: f64,
    d: usize,
}

impl CoherenceBlock<'_> {
    fn level_gap(&self, j: usize) -> i64 {
        self.medium.level_index(j + self.d) - self.medium.level_index(j)
    }

    /// `λ_j t`.
    fn rate_times(&self, j: usize, t: f64) -> Complex64 {
        Complex64::new(
            -0.5 * self.gamma * (2 * j + self.d) as f64 * t,
            -(self.level_gap(j) as f64) * (self.medium.chi() * t),
        )
    }

    fn coupling(&self, j: usize) -> f64 {
        self.gamma * (((j + self.d + 1) * (j + 1)) as f64).sqrt()
    }

    /// Constant integer increment of the level gap along the block, if any.
    fn uniform_step(&self) -> Option<i64> {
        // gaps are polynomial in j of degree <= 2, so a short prefix decides
        let step = self.level_gap(1) - self.level_gap(0);
        (1..4).all(|j| self.level_gap(j + 1) - self.level_gap(j) == step).then_some(step)
    }

    /// Closed form for equally spaced `λ_j` with spacing `δ = −γ − iχ·step`:
    /// `x_j(t) = e^{λ_j t} Σ_k γ^k √(C(n+k,k)C(m+k,k)) g^k x_{j+k}(0)`,
    /// `g = (e^{δt} − 1)/δ`.
    fn propagate_uniform(&self, x0: &[Complex64], step: i64, t: f64) -> Vec<Complex64> {
        let len = x0.len();
        let delta = Complex64::new(-self.gamma, -(step as f64) * self.medium.chi());
        let g = phi1(delta * t) * t;
        let gg = g * self.gamma;
        (0..len)
            .map(|j| {
                let n = j + self.d;
                let mut acc = x0[j];
                let mut w = Complex64::new(1.0, 0.0);
                for k in 1..len - j {
                    w *= gg * (((n + k) * (j + k)) as f64).sqrt() / k as f64;
                    if w.norm_sqr() == 0.0 {
                        break;
                    }
                    acc += w * x0[j + k];
                }
                self.rate_times(j, t).exp() * acc
            })
            .collect()
    }

    fn propagate_expm(&self, x0: &[Complex64], t: f64) -> Vec<Complex64> {
        let len = x0.len();
        let diag: Vec<Complex64> = (0..len).map(|j| self.rate_times(j, t)).collect();
        let sup: Vec<Complex64> = (0..len.saturating_sub(1))
            .map(|j| Complex64::new(self.coupling(j) * t, 0.0))
            .collect();
        let e = expm_upper_bidiagonal(&diag, &sup);
        (0..len)
            .map(|i| (i..len).map(|k| e[i * len + k] * x0[k]).sum())
            .collect()
    }
}

/// `(e^z − 1)/z`.
fn phi1(z: Complex64) -> Complex64 {
    if z.norm() < 0.1 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 2..16 {
            term *= z / k as f64;
            sum += term;
        }
        sum
    } else {
        (z.exp() - 1.0) / z
    }
}

/// `sinh(z)/z`.
fn sinhc(z: Complex64) -> Complex64 {
    if z.norm() < 0.1 {
        let z2 = z * z;
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 1..8 {
            term *= z2 / ((2 * k) * (2 * k + 1)) as f64;
            sum += term;
        }
        sum
    } else {
        z.sinh() / z
    }
}

/// Divided difference `(e^b − e^a)/(b − a)`.
fn exp_divided_difference(a: Complex64, b: Complex64) -> Complex64 {
    ((a + b) * 0.5).exp() * sinhc((b - a) * 0.5)
}

const TAYLOR_DEGREE: usize = 12;
const SCALED_NORM: f64 = 0.25;

/// `exp(A)` for the upper-bidiagonal `A` with the given diagonal and
/// superdiagonal; returned dense, row-major.
pub(crate) fn expm_upper_bidiagonal(diag: &[Complex64], sup: &[Complex64]) -> Vec<Complex64> {
    let len = diag.len();
    assert_eq!(sup.len(), len.saturating_sub(1));
    if len == 0 {
        return Vec::new();
    }
    let norm = (0..len)
        .map(|j| diag[j].norm() + if j > 0 { sup[j - 1].norm() } else { 0.0 })
        .fold(0.0, f64::max);
    let squarings = if norm > SCALED_NORM {
        (norm / SCALED_NORM).log2().ceil() as i32
    } else {
        0
    };
    let scale = 0.5f64.powi(squarings);
    let b_diag: Vec<Complex64> = diag.iter().map(|z| z * scale).collect();
    let b_sup: Vec<Complex64> = sup.iter().map(|z| z * scale).collect();

    // Horner: E = I + B(I + B/2(I + ... ))
    let mut e = identity(len);
    for k in (1..=TAYLOR_DEGREE).rev() {
        let mut next = vec![Complex64::new(0.0, 0.0); len * len];
        let inv_k = 1.0 / k as f64;
        for i in 0..len {
            for j in i..len {
                let mut v = b_diag[i] * e[i * len + j];
                if i + 1 < len && j > i {
                    v += b_sup[i] * e[(i + 1) * len + j];
                }
                next[i * len + j] = v * inv_k;
            }
            next[i * len + i] += 1.0;
        }
        e = next;
    }
    fix_near_diagonal(&mut e, len, &b_diag, &b_sup);

    let mut level_scale = scale;
    for _ in 0..squarings {
        e = upper_square(&e, len);
        level_scale *= 2.0;
        let d: Vec<Complex64> = diag.iter().map(|z| z * level_scale).collect();
        let s: Vec<Complex64> = sup.iter().map(|z| z * level_scale).collect();
        fix_near_diagonal(&mut e, len, &d, &s);
    }
    e
}

fn identity(len: usize) -> Vec<Complex64> {
    let mut e = vec![Complex64::new(0.0, 0.0); len * len];
    for i in 0..len {
        e[i * len + i] = Complex64::new(1.0, 0.0);
    }
    e
}

fn fix_near_diagonal(e: &mut [Complex64], len: usize, diag: &[Complex64], sup: &[Complex64]) {
    for i in 0..len {
        e[i * len + i] = diag[i].exp();
        if i + 1 < len {
            e[i * len + i + 1] = sup[i] * exp_divided_difference(diag[i], diag[i + 1]);
        }
    }
}

fn upper_square(a: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(0.0, 0.0); len * len];
    for i in 0..len {
        let row = &mut c[i * len..(i + 1) * len];
        for k in i..len {
            let aik = a[i * len + k];
            if aik.norm_sqr() == 0.0 {
                continue;
            }
            let brow = &a[k * len..(k + 1) * len];
            for j in k..len {
                row[j] += aik * brow[j];
            }
        }
    }
    c
}
