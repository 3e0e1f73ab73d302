//! Trigonometric integrals behind the dispersion relation.
//!
//! * `F(α,T) = ∫₀ᵀ (1 − cos τ)/τ^{1+2α} dτ` and its complete value `I(α)`
//! * `S(α,T) = ∫₀ᵀ sin τ/τ^{2α} dτ` and `J(α) = 2α I(α)`
//! * `C(α,T) = ∫₀ᵀ cos τ · τ^{1−2α} dτ`
//! * `−cos(πα) Γ(−2α)`, the closed form of `I(α)`
//!
//! Each partial integral is split into a power-series head on `[0, min(1,T)]`,
//! adaptive Gauss-Kronrod panels of width at most π up to `T = 40`, and an
//! integration-by-parts expansion beyond that.

mod ddouble;
pub mod gamma;
mod oscillatory;
pub mod quadrature;

pub(crate) use ddouble::DoubleDouble;

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use quadrature::{integrate, QuadratureTolerance};

/// Nonlocality order `α ∈ (0, 1)`.
///
/// `1 − α` is stored separately so that orders such as `1 − 1e-20`, which
/// round to 1 in f64, keep their distance from the classical limit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AlphaOrder {
    alpha: f64,
    complement: f64,
}

impl AlphaOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain(format!(
                "alpha must lie in (0,1), got {alpha}"
            )));
        }
        Ok(Self {
            alpha,
            complement: 1.0 - alpha,
        })
    }

    /// Builds the order `α = 1 − complement`.
    pub fn from_complement(complement: f64) -> Result<Self> {
        if !(complement > 0.0 && complement < 1.0) {
            return Err(Error::Domain(format!(
                "1 - alpha must lie in (0,1), got {complement}"
            )));
        }
        Ok(Self {
            alpha: 1.0 - complement,
            complement,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `1 − α`, exact even when α rounds to 1.
    pub fn complement(&self) -> f64 {
        self.complement
    }

    pub fn two_alpha(&self) -> f64 {
        if self.alpha < 0.5 {
            2.0 * self.alpha
        } else {
            2.0 - 2.0 * self.complement
        }
    }

    /// `1/2 − α`, computed from whichever representation is exact.
    pub fn offset_from_half(&self) -> f64 {
        if self.alpha < 0.5 {
            0.5 - self.alpha
        } else {
            self.complement - 0.5
        }
    }
}

/// Tunable knobs for the partial integrals.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrigQuadrature {
    /// Upper end of the power-series head.
    pub head_cutoff: f64,
    /// Maximal width of the initial Gauss-Kronrod panels.
    pub panel_width: f64,
    /// Start of the integration-by-parts far field.
    pub far_start: f64,
    /// Series terms are summed until they fall below this fraction of the sum.
    pub series_rel_tol: f64,
    pub tolerance: QuadratureTolerance,
}

impl Default for TrigQuadrature {
    fn default() -> Self {
        Self {
            head_cutoff: 1.0,
            panel_width: PI,
            far_start: 40.0,
            series_rel_tol: 1e-16,
            tolerance: QuadratureTolerance::default(),
        }
    }
}

#[derive(Clone, Copy)]
enum Kind {
    OneMinusCos,
    Sine,
    Cosine,
}

impl Kind {
    // Head series: Σ_k (−1)^k ε^{2k+2c} / ((2k+s)! (2k+2c)), c = 1 − α.
    fn factorial_shift(self) -> u32 {
        match self {
            Kind::OneMinusCos => 2,
            Kind::Sine => 1,
            Kind::Cosine => 0,
        }
    }

    fn integrand(self, alpha: AlphaOrder) -> impl Fn(f64) -> f64 {
        let two_alpha = alpha.two_alpha();
        move |tau: f64| match self {
            Kind::OneMinusCos => {
                let s = (0.5 * tau).sin();
                2.0 * s * s * tau.powf(-1.0 - two_alpha)
            }
            Kind::Sine => tau.sin() * tau.powf(-two_alpha),
            Kind::Cosine => tau.cos() * tau.powf(1.0 - two_alpha),
        }
    }

    fn far(self, alpha: AlphaOrder, a: f64, b: f64) -> f64 {
        let two_alpha = alpha.two_alpha();
        match self {
            Kind::OneMinusCos => {
                let power = if b.is_infinite() {
                    a.powf(-two_alpha)
                } else {
                    a.powf(-two_alpha) - b.powf(-two_alpha)
                };
                power / two_alpha - oscillatory::definite(-1.0 - two_alpha, a, b).re
            }
            Kind::Sine => oscillatory::definite(-two_alpha, a, b).im,
            Kind::Cosine => oscillatory::definite(1.0 - two_alpha, a, b).re,
        }
    }
}

impl TrigQuadrature {
    fn head(&self, kind: Kind, alpha: AlphaOrder, eps: f64) -> f64 {
        if eps == 0.0 {
            return 0.0;
        }
        let two_c = 2.0 * alpha.complement();
        let eps2 = eps * eps;
        let shift = kind.factorial_shift();
        // (2k+s)! carried together with the power of ε.
        let mut base = eps.powf(two_c) / (1..=shift).product::<u32>() as f64;
        let mut sum = 0.0;
        for k in 0..200u32 {
            let term = base / (2.0 * k as f64 + two_c);
            let signed = if k % 2 == 0 { term } else { -term };
            sum += signed;
            if term.abs() <= self.series_rel_tol * sum.abs() {
                break;
            }
            let n = 2 * k + shift;
            base *= eps2 / (((n + 1) * (n + 2)) as f64);
        }
        sum
    }

    fn partial(&self, kind: Kind, alpha: AlphaOrder, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("upper limit must be >= 0, got {t}")));
        }
        let eps = self.head_cutoff.min(t);
        let mut total = self.head(kind, alpha, eps);
        let mid_end = t.min(self.far_start);
        if mid_end > eps {
            let r = integrate(
                kind.integrand(alpha),
                eps,
                mid_end,
                self.panel_width,
                self.tolerance,
            )?;
            total += r.value;
        }
        if t > mid_end {
            total += kind.far(alpha, mid_end, t);
        }
        Ok(total)
    }

    /// `F(α,T)`.
    pub fn f(&self, alpha: AlphaOrder, t: f64) -> Result<f64> {
        self.partial(Kind::OneMinusCos, alpha, t)
    }

    /// `S(α,T)`.
    pub fn s(&self, alpha: AlphaOrder, t: f64) -> Result<f64> {
        self.partial(Kind::Sine, alpha, t)
    }

    /// `C(α,T)`. Exactly `sin T` at α = 1/2.
    pub fn c(&self, alpha: AlphaOrder, t: f64) -> Result<f64> {
        if alpha.offset_from_half() == 0.0 {
            if !(t >= 0.0) {
                return Err(Error::Domain(format!("upper limit must be >= 0, got {t}")));
            }
            return Ok(t.sin());
        }
        self.partial(Kind::Cosine, alpha, t)
    }

    /// `I(α) = F(α, ∞)` by quadrature plus the far-field expansion.
    pub fn i(&self, alpha: AlphaOrder) -> Result<f64> {
        let a = self.far_start;
        Ok(self.f(alpha, a)? + Kind::OneMinusCos.far(alpha, a, f64::INFINITY))
    }
}

/// `F(α,T) = ∫₀ᵀ (1 − cos τ)/τ^{1+2α} dτ` with default tolerances.
pub fn partial_trig_integral_f(alpha: AlphaOrder, t: f64) -> Result<f64> {
    TrigQuadrature::default().f(alpha, t)
}

/// `I(α) = ∫₀^∞ (1 − cos τ)/τ^{1+2α} dτ`, computed by quadrature.
pub fn trig_integral_i(alpha: AlphaOrder) -> Result<f64> {
    TrigQuadrature::default().i(alpha)
}

/// `S(α,T) = ∫₀ᵀ sin τ/τ^{2α} dτ`.
pub fn partial_sine_integral_s(alpha: AlphaOrder, t: f64) -> Result<f64> {
    TrigQuadrature::default().s(alpha, t)
}

/// `C(α,T) = ∫₀ᵀ cos τ · τ^{1−2α} dτ`.
pub fn partial_cosine_integral_c(alpha: AlphaOrder, t: f64) -> Result<f64> {
    TrigQuadrature::default().c(alpha, t)
}

/// `J(α) = ∫₀^∞ sin τ/τ^{2α} dτ`, defined through `J = 2α I(α)`.
pub fn improper_sine_integral_j(alpha: AlphaOrder) -> Result<f64> {
    Ok(alpha.two_alpha() * trig_integral_i(alpha)?)
}

/// `−cos(πα) Γ(−2α)`, continuously extended by π/2 at α = 1/2.
///
/// Rewritten as `Γ(2−2α)/(2α) · sin(πε)/(2ε)` with `ε = 1/2 − α`, so Γ is only
/// evaluated on (0, 2) and the removable singularity is a plain sinc.
pub fn gamma_reflection_value(alpha: AlphaOrder) -> f64 {
    let eps = alpha.offset_from_half();
    let sinc_part = if eps.abs() < 1e-6 {
        let z = PI * eps;
        FRAC_PI_2 * (1.0 - z * z / 6.0 + z.powi(4) / 120.0)
    } else {
        (PI * eps).sin() / (2.0 * eps)
    };
    gamma::gamma(2.0 * alpha.complement()) / alpha.two_alpha() * sinc_part
}
