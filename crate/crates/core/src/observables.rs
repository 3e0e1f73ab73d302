//! Conserved functionals, the nonlocal seminorm and the decay bounds.
//!
//! Under the nonunitary transform `∫|v|² dx = 2π ∫|v̂|² dξ`, so the energy
//! `E = (ρ/2)‖u_t‖² + (κ/2)·seminorm(u)` becomes `ρπ ∫ (|û_t|² + ω²|û|²) dξ`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::dispersion::{self, PeridynamicParams};
use crate::error::{Error, Result};
use crate::specfun::quadrature::{integrate, integrate_panels, QuadratureTolerance};
use crate::spectral::{self, DataSource, FieldSnapshot, SpectralGrid, SpectralState};

fn check_snapshot(snapshot: &FieldSnapshot, grid: &SpectralGrid) -> Result<()> {
    for len in [snapshot.u.len(), snapshot.u_t.len()] {
        if len != grid.n_modes() {
            return Err(Error::LengthMismatch {
                expected: grid.n_modes(),
                got: len,
            });
        }
    }
    Ok(())
}

/// `dx Σ f²`.
pub fn l2_norm_sq(field: &[f64], grid: &SpectralGrid) -> f64 {
    grid.dx() * field.iter().map(|v| v * v).sum::<f64>()
}

/// `2π dξ Σ |m|²`, equal to [`l2_norm_sq`] of the inverse transform.
pub fn l2_norm_sq_modes(modes: &[Complex64], grid: &SpectralGrid) -> f64 {
    2.0 * PI * grid.dxi() * modes.iter().map(|z| z.norm_sqr()).sum::<f64>()
}

/// `(ρ/2) ‖u_t‖²` from real-space samples.
pub fn kinetic_energy(snapshot: &FieldSnapshot, grid: &SpectralGrid, rho: f64) -> f64 {
    0.5 * rho * l2_norm_sq(&snapshot.u_t, grid)
}

/// `∬_{|y|<δ} |u(x) − u(x−y)|² / |y|^{1+2α} dx dy = (2πρ/κ) ∫ ω² |û|² dξ`.
pub fn nonlocal_seminorm(modes: &[Complex64], state: &SpectralState) -> f64 {
    let p = state.params();
    seminorm_with(modes, state.omega_k(), state.grid(), p.rho / p.kappa)
}

fn seminorm_with(
    modes: &[Complex64],
    omega: &[f64],
    grid: &SpectralGrid,
    rho_over_kappa: f64,
) -> f64 {
    let sum: f64 = modes
        .iter()
        .zip(omega)
        .map(|(z, w)| w * w * z.norm_sqr())
        .sum();
    2.0 * PI * rho_over_kappa * grid.dxi() * sum
}

/// `E(t)`: kinetic part from the real-space samples, elastic part from the
/// modal identity at the snapshot's time.
pub fn energy(snapshot: &FieldSnapshot, state: &SpectralState) -> Result<f64> {
    let grid = state.grid();
    check_snapshot(snapshot, grid)?;
    let p = state.params();
    let (u_hat, _) = state.modes_at(snapshot.t);
    Ok(kinetic_energy(snapshot, grid, p.rho) + 0.5 * p.kappa * nonlocal_seminorm(&u_hat, state))
}

/// `(ρ/2)‖u_t‖² + (ρc²/2)‖u_x‖²` for a snapshot of [`spectral::classical_evolve`].
pub fn classical_energy(snapshot: &FieldSnapshot, state: &SpectralState, c: f64) -> Result<f64> {
    let grid = state.grid();
    check_snapshot(snapshot, grid)?;
    let rho = state.params().rho;
    let (u_hat, _) = state.classical_modes_at(snapshot.t, c);
    let omega: Vec<f64> = (0..grid.n_modes()).map(|i| c * grid.xi(i).abs()).collect();
    // ρπ ∫ c²ξ²|û|² written through the same helper with κ = ρ.
    Ok(kinetic_energy(snapshot, grid, rho) + 0.5 * rho * seminorm_with(&u_hat, &omega, grid, 1.0))
}

/// The conserved value `ρπ ∫ (ω²|v̂₀|² + |v̂₁|²) dξ`.
pub fn conserved_energy(state: &SpectralState) -> f64 {
    let rho = state.params().rho;
    let sum: f64 = state
        .v0_hat()
        .iter()
        .zip(state.v1_hat())
        .zip(state.omega_k())
        .map(|((a, b), w)| w * w * a.norm_sqr() + b.norm_sqr())
        .sum();
    rho * PI * state.grid().dxi() * sum
}

/// `P = ρ ∫ u_t dx`.
pub fn momentum(snapshot: &FieldSnapshot, grid: &SpectralGrid, rho: f64) -> f64 {
    rho * grid.dx() * snapshot.u_t.iter().sum::<f64>()
}

/// The conserved value `P = 2πρ v̂₁(0)`.
pub fn conserved_momentum(state: &SpectralState) -> f64 {
    let g = state.grid();
    2.0 * PI * state.params().rho * state.v1_hat()[g.slot(0)].re
}

/// `L = ρ ∫ x u_t dx`.
pub fn angular_momentum(snapshot: &FieldSnapshot, grid: &SpectralGrid, rho: f64) -> f64 {
    rho * grid.dx()
        * snapshot
            .u_t
            .iter()
            .enumerate()
            .map(|(j, v)| grid.x(j) * v)
            .sum::<f64>()
}

/// Real-space evaluation of the nonlocal operator.
///
/// `Q(x) = ∫₀^δ (2u(x) − u(x+y) − u(x−y)) / y^{1+2α} dy`, so that the
/// principal-value operator is `K(u)(x) = −2κ Q(x)` and the seminorm is
/// `2 ∫ u Q dx`. On `[0, h]` the second difference is replaced by its
/// Taylor leading term `−u″(x) y²`.
pub struct DirectSeminorm {
    pub head: f64,
    pub tolerance: QuadratureTolerance,
}

impl Default for DirectSeminorm {
    fn default() -> Self {
        Self {
            head: 1e-3,
            tolerance: QuadratureTolerance {
                rel: 1e-9,
                ..QuadratureTolerance::default()
            },
        }
    }
}

impl DirectSeminorm {
    pub fn q<F: Fn(f64) -> f64>(&self, u: &F, x: f64, p: &PeridynamicParams) -> Result<f64> {
        let two_a = p.alpha.two_alpha();
        let two_c = 2.0 * p.alpha.complement();
        let h = self.head.min(p.delta);
        let u0 = u(x);
        let second = (u(x + h) - 2.0 * u0 + u(x - h)) / (h * h);
        let head = -second * h.powf(two_c) / two_c;
        let mut breaks = vec![h];
        while breaks[breaks.len() - 1] * 2.0 < p.delta {
            let b = breaks[breaks.len() - 1] * 2.0;
            breaks.push(b);
        }
        breaks.push(p.delta);
        let body = integrate_panels(
            |y: f64| (2.0 * u0 - u(x + y) - u(x - y)) * y.powf(-1.0 - two_a),
            &breaks,
            self.tolerance,
        )?;
        Ok(head + body.value)
    }

    /// `K(u)(x) = −2κ Q(x)`.
    pub fn operator<F: Fn(f64) -> f64>(&self, u: &F, x: f64, p: &PeridynamicParams) -> Result<f64> {
        Ok(-2.0 * p.kappa * self.q(u, x, p)?)
    }

    /// `2 dx Σ_j u(x_j) Q(x_j)` over the grid.
    pub fn seminorm<F: Fn(f64) -> f64 + Sync>(
        &self,
        u: &F,
        grid: &SpectralGrid,
        p: &PeridynamicParams,
    ) -> Result<f64> {
        let terms: Vec<f64> = (0..grid.n_modes())
            .into_par_iter()
            .map(|j| {
                let x = grid.x(j);
                let ux = u(x);
                if ux == 0.0 {
                    Ok(0.0)
                } else {
                    Ok(ux * self.q(u, x, p)?)
                }
            })
            .collect::<Result<_>>()?;
        Ok(2.0 * grid.dx() * terms.iter().sum::<f64>())
    }
}

/// Seminorm of a function given as a closure, by direct double integration.
pub fn nonlocal_seminorm_direct<F: Fn(f64) -> f64 + Sync>(
    u: &F,
    grid: &SpectralGrid,
    p: &PeridynamicParams,
) -> Result<f64> {
    DirectSeminorm::default().seminorm(u, grid, p)
}

/// `min{t, 1/ω}`; the zero mode takes the `t` branch.
pub fn min_t_inverse_omega(t: f64, omega: f64) -> f64 {
    if omega == 0.0 {
        t
    } else {
        t.min(1.0 / omega)
    }
}

/// `‖v₀‖ + √(2π) ‖v̂₁ min{t, 1/ω}‖`, evaluated on the modal grid.
pub fn l2_decay_bound(t: f64, state: &SpectralState) -> f64 {
    let g = state.grid();
    let v0_norm = l2_norm_sq_modes(state.v0_hat(), g).sqrt();
    let weighted: f64 = state
        .v1_hat()
        .iter()
        .zip(state.omega_k())
        .map(|(b, &w)| b.norm_sqr() * min_t_inverse_omega(t, w).powi(2))
        .sum();
    v0_norm + (2.0 * PI).sqrt() * (g.dxi() * weighted).sqrt()
}

/// Precomputed pieces of the pointwise decay bound
/// `|u(t,x)| ≤ min{ ‖v̂₀‖₁ + ‖v̂₁ min{t,1/ω}‖₁, (1+|x|)/t · W }`
/// with `W` the sum of the half-line `W^{1,1}` norms of `v̂₀/ω′` and `v̂₁/(ωω′)`.
#[derive(Clone, Debug)]
pub struct DecayBounds {
    dxi: f64,
    v0_l1: f64,
    v1_abs: Vec<f64>,
    omega: Vec<f64>,
    w11: f64,
}

/// Frequency beyond which the Gaussian family is treated as zero.
const GAUSSIAN_CUTOFF: f64 = 60.0;

impl DecayBounds {
    pub fn new(state: &SpectralState) -> Result<Self> {
        let g = state.grid();
        let w11 = match state.source() {
            DataSource::Gaussian { v } => gaussian_w11(v, state.params())?,
            DataSource::Sampled => sampled_w11(state)?,
        };
        Ok(Self {
            dxi: g.dxi(),
            v0_l1: g.dxi() * state.v0_hat().iter().map(|z| z.norm()).sum::<f64>(),
            v1_abs: state.v1_hat().iter().map(|z| z.norm()).collect(),
            omega: state.omega_k().to_vec(),
            w11,
        })
    }

    /// `‖v̂₀‖₁ + ‖v̂₁ min{t,1/ω}‖₁`.
    pub fn l1_bound(&self, t: f64) -> f64 {
        let v1: f64 = self
            .v1_abs
            .iter()
            .zip(&self.omega)
            .map(|(b, &w)| b * min_t_inverse_omega(t, w))
            .sum();
        self.v0_l1 + self.dxi * v1
    }

    /// Sum of the four half-line `W^{1,1}` norms.
    pub fn w11_norms(&self) -> f64 {
        self.w11
    }

    /// `(1+|x|)/t · W`.
    pub fn dispersive_bound(&self, t: f64, x: f64) -> f64 {
        (1.0 + x.abs()) / t * self.w11
    }

    pub fn sup_bound(&self, t: f64, x: f64) -> Result<f64> {
        if !(t > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "sup bound needs t > 0, got {t}"
            )));
        }
        Ok(self.l1_bound(t).min(self.dispersive_bound(t, x)))
    }
}

/// Pointwise bound on `|u(t,x)|`; build a [`DecayBounds`] once for repeated use.
pub fn sup_bound(t: f64, x: f64, state: &SpectralState) -> Result<f64> {
    DecayBounds::new(state)?.sup_bound(t, x)
}

fn gaussian_w11(v: f64, p: &PeridynamicParams) -> Result<f64> {
    // On ξ > 0: f₀ = v̂₀/ω′, f₁ = v̂₁/(ωω′) with v̂₀ = ½e^{−ξ²/8}, v̂₁ = ivξv̂₀.
    // |f| is even in ξ for both, so each half-line contributes the same.
    let eval = |xi: f64| -> Result<[f64; 4]> {
        let w = dispersion::omega(xi, p)?;
        let w1 = dispersion::omega_prime(xi, p)?;
        let w2 = dispersion::omega_second(xi, p)?;
        let a = spectral::gaussian_v0_hat(xi);
        let da = -0.25 * xi * a;
        let f0 = a / w1;
        let df0 = da / w1 - a * w2 / (w1 * w1);
        let b = v * xi * a;
        let db = v * (a + xi * da);
        let ww1 = w * w1;
        let f1 = b / ww1;
        let df1 = db / ww1 - b * (w1 * w1 + w * w2) / (ww1 * ww1);
        Ok([f0.abs(), df0.abs(), f1.abs(), df1.abs()])
    };
    let tol = QuadratureTolerance {
        rel: 1e-8,
        ..QuadratureTolerance::default()
    };
    let mut total = 0.0;
    for component in 0..4 {
        if component >= 2 && v == 0.0 {
            continue;
        }
        let failure = std::cell::Cell::new(None);
        let r = integrate(
            |xi| match eval(xi) {
                Ok(vals) => vals[component],
                Err(e) => {
                    failure.set(Some(e.to_string()));
                    0.0
                }
            },
            0.0,
            GAUSSIAN_CUTOFF,
            1.0,
            tol,
        );
        if let Some(msg) = failure.take() {
            return Err(Error::NonIntegrable(msg));
        }
        match r {
            Ok(r) => total += 2.0 * r.value,
            Err(Error::QuadratureBudget { estimate, .. }) => {
                return Err(Error::NonIntegrable(format!(
                    "W^{{1,1}} quadrature did not converge (error estimate {estimate:.3e})"
                )))
            }
            Err(e) => return Err(e),
        }
    }
    Ok(total)
}

fn sampled_w11(state: &SpectralState) -> Result<f64> {
    let g = state.grid();
    let p = state.params();
    let zero = g.slot(0);
    let v1 = state.v1_hat();
    let peak = v1.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    if peak > 0.0 && v1[zero].norm() > 1e-10 * peak {
        return Err(Error::NonIntegrable(
            "v̂₁(0) ≠ 0 makes v̂₁/(ωω′) behave like 1/ξ at the origin".into(),
        ));
    }
    let n = g.n_modes();
    // f on every mode except ξ = 0 (both half-lines are open at 0).
    let mut f0 = vec![Complex64::new(0.0, 0.0); n];
    let mut f1 = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        if i == zero {
            continue;
        }
        let xi = g.xi(i);
        let w = state.omega_k()[i];
        let w1 = dispersion::omega_prime(xi, p)?;
        f0[i] = state.v0_hat()[i] / w1;
        f1[i] = v1[i] / (w * w1);
    }
    let h = g.dxi();
    let half_line = |f: &[Complex64], range: std::ops::Range<usize>| -> f64 {
        let mut total = 0.0;
        let idx: Vec<usize> = range.collect();
        for (pos, &i) in idx.iter().enumerate() {
            total += f[i].norm() * h;
            let d = if pos == 0 {
                (f[idx[1]] - f[i]) / h
            } else if pos + 1 == idx.len() {
                (f[i] - f[idx[pos - 1]]) / h
            } else {
                (f[idx[pos + 1]] - f[idx[pos - 1]]) / (2.0 * h)
            };
            total += d.norm() * h;
        }
        total
    };
    let mut total = 0.0;
    for f in [&f0, &f1] {
        total += half_line(f, 0..zero) + half_line(f, zero + 1..n);
    }
    Ok(total)
}

/// Descriptive data attached to a time series.
#[derive(Clone, Debug, Serialize)]
pub struct SeriesMetadata {
    pub scenario: String,
    pub params: PeridynamicParams,
    pub grid: SpectralGrid,
    pub source: DataSource,
}

/// Observables sampled along one trajectory.
#[derive(Clone, Debug, Serialize)]
pub struct ObservableSeries {
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
    pub momentum: Vec<f64>,
    pub angular_momentum: Vec<f64>,
    pub l2_norm_u: Vec<f64>,
    pub l2_bound: Vec<f64>,
    pub seminorm: Vec<f64>,
    pub metadata: SeriesMetadata,
}

/// Largest deviations from the initial values along a series.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DriftStats {
    /// `max |E(t) − E(0)| / E(0)` (absolute when `E(0) = 0`).
    pub energy_relative: f64,
    pub momentum_absolute: f64,
    pub angular_momentum_absolute: f64,
}

fn max_deviation(values: &[f64]) -> f64 {
    values
        .iter()
        .map(|v| (v - values[0]).abs())
        .fold(0.0, f64::max)
}

impl ObservableSeries {
    pub fn drift(&self) -> DriftStats {
        let e0 = self.energy[0];
        let de = max_deviation(&self.energy);
        DriftStats {
            energy_relative: if e0 != 0.0 { de / e0 } else { de },
            momentum_absolute: max_deviation(&self.momentum),
            angular_momentum_absolute: max_deviation(&self.angular_momentum),
        }
    }
}

/// Evolves `state` to each of `times` and records every observable.
pub fn track_series(
    state: &SpectralState,
    times: &[f64],
    scenario: &str,
) -> Result<ObservableSeries> {
    if times.is_empty() {
        return Err(Error::InvalidArgument("time list is empty".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "times must be strictly ascending".into(),
        ));
    }
    let g = state.grid();
    let rho = state.params().rho;
    let mut s = ObservableSeries {
        times: times.to_vec(),
        energy: Vec::with_capacity(times.len()),
        momentum: Vec::with_capacity(times.len()),
        angular_momentum: Vec::with_capacity(times.len()),
        l2_norm_u: Vec::with_capacity(times.len()),
        l2_bound: Vec::with_capacity(times.len()),
        seminorm: Vec::with_capacity(times.len()),
        metadata: SeriesMetadata {
            scenario: scenario.to_string(),
            params: *state.params(),
            grid: *g,
            source: state.source(),
        },
    };
    for &t in times {
        let snap = spectral::evolve(state, t)?;
        let (u_hat, _) = state.modes_at(t);
        s.energy.push(energy(&snap, state)?);
        s.momentum.push(momentum(&snap, g, rho));
        s.angular_momentum.push(angular_momentum(&snap, g, rho));
        s.l2_norm_u.push(l2_norm_sq(&snap.u, g).sqrt());
        s.l2_bound.push(l2_decay_bound(t, state));
        s.seminorm.push(nonlocal_seminorm(&u_hat, state));
    }
    Ok(s)
}
