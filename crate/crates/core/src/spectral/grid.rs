use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};

/// Uniform grid on `[−L, L)` with its dual frequency grid `ξ_k = πk/L`,
/// `k ∈ [−n/2, n/2)`.
///
/// Mode arrays are stored in natural order: index `i` holds `k = i − n/2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectralGrid {
    n_modes: usize,
    half_width: f64,
}

impl SpectralGrid {
    pub fn new(half_width: f64, n_modes: usize) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "domain half-width must be positive, got {half_width}"
            )));
        }
        if n_modes < 16 || !n_modes.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "mode count must be a power of two >= 16, got {n_modes}"
            )));
        }
        Ok(Self {
            n_modes,
            half_width,
        })
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.n_modes as f64
    }

    pub fn dxi(&self) -> f64 {
        PI / self.half_width
    }

    /// Largest resolved |ξ|, attained by the unpaired mode `k = −n/2`.
    pub fn xi_max(&self) -> f64 {
        self.dxi() * (self.n_modes / 2) as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.dx()
    }

    /// Signed wavenumber index of storage slot `i`.
    pub fn wavenumber(&self, i: usize) -> i64 {
        i as i64 - (self.n_modes / 2) as i64
    }

    pub fn xi(&self, i: usize) -> f64 {
        self.wavenumber(i) as f64 * self.dxi()
    }

    /// Storage slot of wavenumber `k`.
    pub fn slot(&self, k: i64) -> usize {
        (k + (self.n_modes / 2) as i64) as usize
    }

    pub fn positions(&self) -> Vec<f64> {
        (0..self.n_modes).map(|j| self.x(j)).collect()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.n_modes).map(|i| self.xi(i)).collect()
    }
}
