//! Exact-in-time spectral evolution.
//!
//! Each mode evolves as `û(t,ξ) = v̂₀ cos(ωt) + v̂₁ sin(ωt)/ω`, so a snapshot
//! at any time costs one pass over the modes and two inverse transforms.

mod grid;
mod transform;

pub use grid::SpectralGrid;
pub use transform::{
    forward_transform, hermitian_mismatch, inverse_transform, inverse_transform_complex,
    HERMITIAN_TOLERANCE, IMAGINARY_RESIDUE_LIMIT,
};

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dispersion::{self, PeridynamicParams};
use crate::error::{Error, Result};

/// Where the modal data came from; the Gaussian family carries closed-form
/// derivatives used by the decay bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum DataSource {
    /// `v₀ = √(2π)e^{−2x²}`, `v₁ = 4vx√(2π)e^{−2x²}`.
    Gaussian {
        v: f64,
    },
    Sampled,
}

/// Real-space samples and exact transforms of the Gaussian test data.
#[derive(Clone, Debug)]
pub struct GaussianData {
    pub v: f64,
    pub v0: Vec<f64>,
    pub v1: Vec<f64>,
    pub v0_hat: Vec<Complex64>,
    pub v1_hat: Vec<Complex64>,
}

pub fn gaussian_v0(x: f64) -> f64 {
    (2.0 * PI).sqrt() * (-2.0 * x * x).exp()
}

pub fn gaussian_v1(v: f64, x: f64) -> f64 {
    4.0 * v * x * gaussian_v0(x)
}

pub fn gaussian_v0_hat(xi: f64) -> f64 {
    0.5 * (-xi * xi / 8.0).exp()
}

pub fn gaussian_v1_hat(v: f64, xi: f64) -> Complex64 {
    Complex64::new(0.0, v * xi * gaussian_v0_hat(xi))
}

/// Samples `v₀, v₁` on the grid together with `v̂₀ = ½e^{−ξ²/8}`, `v̂₁ = ivξv̂₀`.
///
/// `v₁ = −v·v₀′`, so the pulse initially travels towards +x. The unpaired
/// Nyquist mode of `v̂₁` is purely imaginary and has no partner, so it is
/// zeroed to keep the modal array Hermitian.
pub fn gaussian_initial_data(v: f64, grid: &SpectralGrid) -> GaussianData {
    let xs = grid.positions();
    let xis = grid.frequencies();
    let mut v1_hat: Vec<Complex64> = xis.iter().map(|&xi| gaussian_v1_hat(v, xi)).collect();
    v1_hat[0] = Complex64::new(0.0, 0.0);
    GaussianData {
        v,
        v0: xs.iter().map(|&x| gaussian_v0(x)).collect(),
        v1: xs.iter().map(|&x| gaussian_v1(v, x)).collect(),
        v0_hat: xis
            .iter()
            .map(|&xi| Complex64::new(gaussian_v0_hat(xi), 0.0))
            .collect(),
        v1_hat,
    }
}

/// Modal initial data plus `ω(ξ_k)`; immutable once built.
#[derive(Clone, Debug)]
pub struct SpectralState {
    grid: SpectralGrid,
    params: PeridynamicParams,
    v0_hat: Vec<Complex64>,
    v1_hat: Vec<Complex64>,
    omega_k: Vec<f64>,
    source: DataSource,
}

/// `u(t,·)` and `u_t(t,·)` on the grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FieldSnapshot {
    pub t: f64,
    pub u: Vec<f64>,
    pub u_t: Vec<f64>,
}

fn omega_table(grid: &SpectralGrid, p: &PeridynamicParams) -> Result<Vec<f64>> {
    let half = grid.n_modes() / 2;
    // ω is even: evaluate k = 0..=n/2 once and mirror.
    let positive: Vec<f64> = (0..=half)
        .into_par_iter()
        .map(|k| dispersion::omega(k as f64 * grid.dxi(), p))
        .collect::<Result<_>>()?;
    Ok((0..grid.n_modes())
        .map(|i| positive[grid.wavenumber(i).unsigned_abs() as usize])
        .collect())
}

/// Builds a state from Hermitian mode arrays, precomputing `ω(ξ_k)`.
pub fn prepare_state(
    v0_hat: Vec<Complex64>,
    v1_hat: Vec<Complex64>,
    grid: &SpectralGrid,
    p: &PeridynamicParams,
) -> Result<SpectralState> {
    SpectralState::build(v0_hat, v1_hat, grid, p, DataSource::Sampled)
}

impl SpectralState {
    fn build(
        v0_hat: Vec<Complex64>,
        v1_hat: Vec<Complex64>,
        grid: &SpectralGrid,
        p: &PeridynamicParams,
        source: DataSource,
    ) -> Result<Self> {
        for m in [&v0_hat, &v1_hat] {
            if m.len() != grid.n_modes() {
                return Err(Error::LengthMismatch {
                    expected: grid.n_modes(),
                    got: m.len(),
                });
            }
            transform::ensure_hermitian(m, grid)?;
        }
        Ok(Self {
            grid: *grid,
            params: *p,
            v0_hat,
            v1_hat,
            omega_k: omega_table(grid, p)?,
            source,
        })
    }

    /// State for the Gaussian family with closed-form modal data.
    pub fn gaussian(v: f64, grid: &SpectralGrid, p: &PeridynamicParams) -> Result<Self> {
        let data = gaussian_initial_data(v, grid);
        Self::build(
            data.v0_hat,
            data.v1_hat,
            grid,
            p,
            DataSource::Gaussian { v },
        )
    }

    /// State from real-space samples of `v₀` and `v₁`.
    pub fn from_samples(
        v0: &[f64],
        v1: &[f64],
        grid: &SpectralGrid,
        p: &PeridynamicParams,
    ) -> Result<Self> {
        prepare_state(
            forward_transform(v0, grid)?,
            forward_transform(v1, grid)?,
            grid,
            p,
        )
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn params(&self) -> &PeridynamicParams {
        &self.params
    }

    pub fn v0_hat(&self) -> &[Complex64] {
        &self.v0_hat
    }

    pub fn v1_hat(&self) -> &[Complex64] {
        &self.v1_hat
    }

    pub fn omega_k(&self) -> &[f64] {
        &self.omega_k
    }

    pub fn source(&self) -> DataSource {
        self.source
    }

    /// `(û(t,ξ_k), û_t(t,ξ_k))` under the peridynamic dispersion relation.
    pub fn modes_at(&self, t: f64) -> (Vec<Complex64>, Vec<Complex64>) {
        modal_evolution(&self.v0_hat, &self.v1_hat, &self.omega_k, t)
    }

    /// The same modal formula with `ω = c|ξ|`.
    pub fn classical_modes_at(&self, t: f64, c: f64) -> (Vec<Complex64>, Vec<Complex64>) {
        let omega: Vec<f64> = (0..self.grid.n_modes())
            .map(|i| c * self.grid.xi(i).abs())
            .collect();
        modal_evolution(&self.v0_hat, &self.v1_hat, &omega, t)
    }
}

/// `sin(ωt)/ω`, with the removable singularity at `ω = 0` handled by a series.
pub fn sin_over_omega(omega: f64, t: f64) -> f64 {
    let z = omega * t;
    if z.abs() < 1e-4 {
        t * (1.0 - z * z / 6.0)
    } else {
        z.sin() / omega
    }
}

fn modal_evolution(
    v0_hat: &[Complex64],
    v1_hat: &[Complex64],
    omega: &[f64],
    t: f64,
) -> (Vec<Complex64>, Vec<Complex64>) {
    v0_hat
        .par_iter()
        .zip(v1_hat.par_iter())
        .zip(omega.par_iter())
        .map(|((&a, &b), &w)| {
            let (s, c) = (w * t).sin_cos();
            (a * c + b * sin_over_omega(w, t), -a * (w * s) + b * c)
        })
        .unzip()
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "time must be >= 0, got {t}"
        )));
    }
    Ok(())
}

fn snapshot(
    t: f64,
    modes: (Vec<Complex64>, Vec<Complex64>),
    grid: &SpectralGrid,
) -> Result<FieldSnapshot> {
    Ok(FieldSnapshot {
        t,
        u: inverse_transform(&modes.0, grid)?,
        u_t: inverse_transform(&modes.1, grid)?,
    })
}

/// `u(t,·)` and `u_t(t,·)` from the exact solution formula.
pub fn evolve(state: &SpectralState, t: f64) -> Result<FieldSnapshot> {
    check_time(t)?;
    snapshot(t, state.modes_at(t), &state.grid)
}

/// Reference evolution under the classical wave equation `u_tt = c² u_xx`.
pub fn classical_evolve(state: &SpectralState, t: f64, c: f64) -> Result<FieldSnapshot> {
    check_time(t)?;
    if !(c > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "wave speed must be positive, got {c}"
        )));
    }
    snapshot(t, state.classical_modes_at(t, c), &state.grid)
}

/// `max|u|` over the outer 5% of the domain relative to `max|u|`; large values
/// mean the periodized domain is too small for the reported time.
pub fn boundary_fraction(field: &[f64]) -> f64 {
    let n = field.len();
    let edge = (n / 40).max(1); // 2.5% on each side
    let peak = field.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if peak == 0.0 {
        return 0.0;
    }
    let outer = field[..edge]
        .iter()
        .chain(&field[n - edge..])
        .fold(0.0f64, |m, v| m.max(v.abs()));
    outer / peak
}
