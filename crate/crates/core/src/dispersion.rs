//! Dispersion relation `ω(ξ)` of the peridynamic wave equation.
//!
//! `ω²(ξ) = (4κ/ρ) |ξ|^{2α} F(α, |ξ|δ)`, evaluated by its power series in
//! double-double arithmetic for `|ξ|δ ≤ 10` and through [`specfun`] above.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::{self, gamma_reflection_value, AlphaOrder, DoubleDouble, TrigQuadrature};

/// Above this value of `|ξ|δ` the power series is not used by [`omega_sq`].
pub const SERIES_SWITCHOVER: f64 = 10.0;

/// The series is refused beyond this argument; cancellation would eat more
/// than the double-double headroom.
pub const SERIES_MAX_ARGUMENT: f64 = 60.0;

/// Model constants `κ, ρ, δ, α`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PeridynamicParams {
    pub kappa: f64,
    pub rho: f64,
    pub delta: f64,
    pub alpha: AlphaOrder,
}

impl PeridynamicParams {
    pub fn new(kappa: f64, rho: f64, delta: f64, alpha: AlphaOrder) -> Result<Self> {
        for (name, v) in [("kappa", kappa), ("rho", rho), ("delta", delta)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self {
            kappa,
            rho,
            delta,
            alpha,
        })
    }

    /// Convenience constructor from a plain `α`.
    pub fn with_alpha(kappa: f64, rho: f64, delta: f64, alpha: f64) -> Result<Self> {
        Self::new(kappa, rho, delta, AlphaOrder::new(alpha)?)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha.alpha()
    }

    /// Returns a copy with a different horizon.
    pub fn with_delta(self, delta: f64) -> Result<Self> {
        Self::new(self.kappa, self.rho, delta, self.alpha)
    }

    /// Returns a copy with a different order.
    pub fn with_order(self, alpha: AlphaOrder) -> Self {
        Self { alpha, ..self }
    }
}

impl Default for PeridynamicParams {
    /// `κ = 1/2, ρ = 1, δ = 1, α = 0.1`.
    fn default() -> Self {
        Self {
            kappa: 0.5,
            rho: 1.0,
            delta: 1.0,
            alpha: AlphaOrder::new(0.1).expect("0.1 is a valid order"),
        }
    }
}

/// `Σ_{k≥1} (−1)^{k+1} T^{2k} / ((k − α)(2k)!)`, equal to `2 T^{2α} F(α,T)`.
fn series_sum(alpha: AlphaOrder, t: f64) -> f64 {
    let t2 = DoubleDouble::product(t, t);
    let c = alpha.complement();
    let mut power = DoubleDouble::from_f64(1.0); // T^{2k}/(2k)!
    let mut sum = DoubleDouble::ZERO;
    for k in 1..=400u32 {
        let n = (2 * k) as f64;
        power = power * t2 / DoubleDouble::product(n - 1.0, n);
        let term = power / DoubleDouble::sum((k - 1) as f64, c);
        sum = if k % 2 == 1 { sum + term } else { sum - term };
        if (k as f64) > t && term.abs().to_f64() <= 1e-20 * sum.abs().to_f64() {
            break;
        }
    }
    sum.to_f64()
}

/// `ω²(ξ)` by the power series; refused when `|ξ|δ` exceeds [`SERIES_MAX_ARGUMENT`].
pub fn omega_sq_series(xi: f64, p: &PeridynamicParams) -> Result<f64> {
    let t = xi.abs() * p.delta;
    if !(t <= SERIES_MAX_ARGUMENT) {
        return Err(Error::Domain(format!(
            "series path limited to |xi|*delta <= {SERIES_MAX_ARGUMENT}, got {t}"
        )));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let scale = 2.0 * p.kappa / p.rho * p.delta.powf(-p.alpha.two_alpha());
    Ok(scale * series_sum(p.alpha, t))
}

/// `ω²(ξ) = (4κ/ρ)|ξ|^{2α} F(α,|ξ|δ)` by the partial trigonometric integral.
pub fn omega_sq_quadrature(xi: f64, p: &PeridynamicParams) -> Result<f64> {
    let t = xi.abs() * p.delta;
    if !t.is_finite() {
        return Err(Error::Domain(format!("frequency must be finite, got {xi}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let f = specfun::partial_trig_integral_f(p.alpha, t)?;
    Ok(4.0 * p.kappa / p.rho * xi.abs().powf(p.alpha.two_alpha()) * f)
}

/// `ω²(ξ)`, choosing the series below `|ξ|δ = 10` and quadrature above.
pub fn omega_sq(xi: f64, p: &PeridynamicParams) -> Result<f64> {
    if xi.abs() * p.delta <= SERIES_SWITCHOVER {
        omega_sq_series(xi, p)
    } else {
        omega_sq_quadrature(xi, p)
    }
}

pub fn omega(xi: f64, p: &PeridynamicParams) -> Result<f64> {
    Ok(omega_sq(xi, p)?.sqrt())
}

/// Explicit majorant of `ω²` obtained by bounding the kernel piecewise.
pub fn omega_sq_upper_bound(xi: f64, p: &PeridynamicParams) -> f64 {
    let t = xi.abs() * p.delta;
    if t == 0.0 {
        return 0.0;
    }
    let a = p.alpha.alpha();
    let two_c = 2.0 * p.alpha.complement();
    let two_a = p.alpha.two_alpha();
    let near = t * t / two_c * (2f64.powf(two_c) / t.powf(two_c)).min(1.0);
    let far = if t > 2.0 {
        2.0 / a * ((t / 2.0).powf(two_a) - 1.0)
    } else {
        0.0
    };
    2.0 * p.kappa / (p.rho * p.delta.powf(two_a)) * (near + far)
}

fn nonzero(xi: f64, what: &str) -> Result<f64> {
    if xi == 0.0 || !xi.is_finite() {
        return Err(Error::Domain(format!(
            "{what} is not defined at xi = {xi}; see dispersion_asymptotics for the limits"
        )));
    }
    Ok(xi.abs())
}

/// Group velocity `ω′(ξ) = 2κ ξ^{2α−1} S(α,ξδ) / (ρ ω(ξ))`, odd in ξ.
pub fn omega_prime(xi: f64, p: &PeridynamicParams) -> Result<f64> {
    let x = nonzero(xi, "omega_prime")?;
    let s = specfun::partial_sine_integral_s(p.alpha, x * p.delta)?;
    let w = omega(x, p)?;
    let v = 2.0 * p.kappa * x.powf(p.alpha.two_alpha() - 1.0) * s / (p.rho * w);
    Ok(v.copysign(xi))
}

/// `ω′` from the product-rule form `d/dξ [ξ^α R^{1/2}]`, `R = (4κ/ρ)F`.
pub fn omega_prime_explicit(xi: f64, p: &PeridynamicParams) -> Result<f64> {
    let x = nonzero(xi, "omega_prime_explicit")?;
    let a = p.alpha.alpha();
    let t = x * p.delta;
    let r = 4.0 * p.kappa / p.rho * specfun::partial_trig_integral_f(p.alpha, t)?;
    let one_minus_cos = 2.0 * (0.5 * t).sin().powi(2);
    let v = a * x.powf(a - 1.0) * r.sqrt()
        + 2.0 * p.kappa * x.powf(-a - 1.0) * one_minus_cos
            / (p.rho * p.delta.powf(p.alpha.two_alpha()))
            / r.sqrt();
    Ok(v.copysign(xi))
}

/// `ω″(ξ)` from the five-term closed form, even in ξ.
pub fn omega_second(xi: f64, p: &PeridynamicParams) -> Result<f64> {
    let x = nonzero(xi, "omega_second")?;
    let (k, rho, d) = (p.kappa, p.rho, p.delta);
    let a = p.alpha.alpha();
    let two_a = p.alpha.two_alpha();
    let t = x * d;
    let r = 4.0 * k / rho * specfun::partial_trig_integral_f(p.alpha, t)?;
    let rs = r.sqrt();
    let omc = 2.0 * (0.5 * t).sin().powi(2);
    let d2a = d.powf(two_a);
    let t1 = a * (a - 1.0) * x.powf(a - 2.0) * rs;
    let t2 = 2.0 * a * k * x.powf(-a - 2.0) * omc / (rho * d2a) / rs;
    let t3 = -2.0 * (a + 1.0) * k * x.powf(-a - 2.0) * omc / (rho * d2a) / rs;
    let t4 = 2.0 * k * x.powf(-a - 1.0) * t.sin() / (rho * d.powf(two_a - 1.0)) / rs;
    let t5 = -4.0 * k * k * x.powf(-3.0 * a - 2.0) * omc * omc / (rho * rho * d2a * d2a) / (r * rs);
    Ok(t1 + t2 + t3 + t4 + t5)
}

/// `ω″ = [(2κ/ρ) ξ^{2α−2} C(α,ξδ) − ω′²] / ω`, an independent route.
pub fn omega_second_via_cosine(xi: f64, p: &PeridynamicParams) -> Result<f64> {
    let x = nonzero(xi, "omega_second_via_cosine")?;
    let c = TrigQuadrature::default().c(p.alpha, x * p.delta)?;
    let w = omega(x, p)?;
    let wp = omega_prime(x, p)?;
    let lead = 2.0 * p.kappa / p.rho * x.powf(p.alpha.two_alpha() - 2.0) * c;
    Ok((lead - wp * wp) / w)
}

/// Behavior of `ω″` as `|ξ| → ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum SecondDerivativeInfinity {
    /// α > 1/2: `ξ^{2−α} ω″(ξ)` converges.
    Limit { exponent: f64, value: f64 },
    /// α ≤ 1/2: `|ξ|^{1+α} ω″(ξ)` oscillates between the two values.
    Oscillating {
        exponent: f64,
        liminf: f64,
        limsup: f64,
    },
}

/// Closed-form limits of ω and its derivatives at 0 and ∞.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DispersionAsymptotics {
    /// `lim_{ξ→0} ω²/ξ²`.
    pub low_freq_slope_sq: f64,
    /// `lim_{|ξ|→∞} |ξ|^{−2α} ω²`.
    pub high_freq_coeff_sq: f64,
    /// `lim_{ξ→0⁺} ω′`.
    pub omega_prime_at_zero: f64,
    /// `lim_{ξ→∞} ξ^{1−α} ω′`.
    pub omega_prime_infty_coeff: f64,
    /// `lim_{ξ→0⁺} ω″/ξ`.
    pub omega_second_over_xi_at_zero: f64,
    pub omega_second_infty: SecondDerivativeInfinity,
}

pub fn dispersion_asymptotics(p: &PeridynamicParams) -> DispersionAsymptotics {
    let (k, rho, d) = (p.kappa, p.rho, p.delta);
    let a = p.alpha.alpha();
    let c = p.alpha.complement();
    let i = gamma_reflection_value(p.alpha);
    let low = k * d.powf(2.0 * c) / (c * rho);
    let omega_second_infty = if a > 0.5 {
        SecondDerivativeInfinity::Limit {
            exponent: 2.0 - a,
            value: -2.0 * a * c * (k / rho).sqrt() * i.sqrt(),
        }
    } else if a < 0.5 {
        let envelope =
            2.0 * k * d.powf(1.0 - p.alpha.two_alpha()) / rho / (4.0 * k * i / rho).sqrt();
        SecondDerivativeInfinity::Oscillating {
            exponent: 1.0 + a,
            liminf: -envelope,
            limsup: envelope,
        }
    } else {
        let osc = (k / rho).sqrt() / i.sqrt();
        let drift = 0.5 * (k * i / rho).sqrt();
        SecondDerivativeInfinity::Oscillating {
            exponent: 1.5,
            liminf: -osc - drift,
            limsup: osc - drift,
        }
    };
    DispersionAsymptotics {
        low_freq_slope_sq: low,
        high_freq_coeff_sq: 4.0 * k / rho * i,
        omega_prime_at_zero: low.sqrt(),
        omega_prime_infty_coeff: 2.0 * a * (k / rho * i).sqrt(),
        omega_second_over_xi_at_zero: -(k * c).sqrt() * d.powf(3.0 - a)
            / (4.0 * (1.0 + c) * rho.sqrt()),
        omega_second_infty,
    }
}

/// `|log(√((1−α)ρ) ω(ξ)/√κ) − α log|ξ||`, the distance of `log ω` from the
/// straight line of slope α.
pub fn log_line_deviation(xi: f64, p: &PeridynamicParams) -> Result<f64> {
    let x = nonzero(xi, "log_line_deviation")?;
    if p.alpha.alpha() < 0.5 {
        return Err(Error::Domain(format!(
            "log_line_deviation needs alpha in [1/2,1), got {}",
            p.alpha.alpha()
        )));
    }
    let scaled = p.alpha.complement() * p.rho * omega_sq(x, p)? / p.kappa;
    Ok((0.5 * scaled.ln() - p.alpha.alpha() * x.ln()).abs())
}

/// `√(1−α) ω(ξ) / (√(κ/ρ) |ξ|)`, which tends to 1 as α → 1.
pub fn classical_limit_ratio(xi: f64, p: &PeridynamicParams) -> Result<f64> {
    let x = nonzero(xi, "classical_limit_ratio")?;
    let scaled = p.alpha.complement() * omega_sq(x, p)? / (p.kappa / p.rho);
    Ok(scaled.sqrt() / x)
}

/// Zeros of `ω″` on `[a, b]`, bracketed on a grid of step `π/(20δ)` and
/// refined by bisection.
pub fn second_derivative_zeros(a: f64, b: f64, p: &PeridynamicParams) -> Result<Vec<f64>> {
    if !(a > 0.0 && b > a) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < a < b, got [{a}, {b}]"
        )));
    }
    let step = std::f64::consts::PI / (20.0 * p.delta);
    let n = ((b - a) / step).ceil() as usize;
    let h = (b - a) / n as f64;
    let mut zeros = Vec::new();
    let mut x0 = a;
    let mut f0 = omega_second(x0, p)?;
    for i in 1..=n {
        let x1 = if i == n { b } else { a + i as f64 * h };
        let f1 = omega_second(x1, p)?;
        if f0 == 0.0 {
            zeros.push(x0);
        } else if f0 * f1 < 0.0 {
            let (mut lo, mut hi, mut flo) = (x0, x1, f0);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let fm = omega_second(mid, p)?;
                if fm * flo > 0.0 {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
                if hi - lo <= 1e-13 * hi {
                    break;
                }
            }
            zeros.push(0.5 * (lo + hi));
        }
        x0 = x1;
        f0 = f1;
    }
    Ok(zeros)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let p = PeridynamicParams::default();
        assert_eq!((p.kappa, p.rho, p.delta, p.alpha()), (0.5, 1.0, 1.0, 0.1));
    }

    #[test]
    fn rejects_bad_constants() {
        let a = AlphaOrder::new(0.2).unwrap();
        assert!(PeridynamicParams::new(0.0, 1.0, 1.0, a).is_err());
        assert!(PeridynamicParams::new(1.0, -1.0, 1.0, a).is_err());
        assert!(PeridynamicParams::new(1.0, 1.0, f64::NAN, a).is_err());
    }

    #[test]
    fn zero_frequency() {
        let p = PeridynamicParams::default();
        assert_eq!(omega_sq(0.0, &p).unwrap(), 0.0);
        assert_eq!(omega_sq_upper_bound(0.0, &p), 0.0);
        assert!(omega_prime(0.0, &p).is_err());
        assert!(omega_second(0.0, &p).is_err());
    }

    #[test]
    fn series_refused_beyond_limit() {
        let p = PeridynamicParams::default();
        assert!(omega_sq_series(61.0, &p).is_err());
    }

    #[test]
    fn third_limit_defaults() {
        let a = dispersion_asymptotics(&PeridynamicParams::default());
        assert!((a.omega_second_over_xi_at_zero + 0.45f64.sqrt() / 7.6).abs() < 1e-15);
        assert!((a.low_freq_slope_sq - 5.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn regime_of_second_derivative_limit() {
        let base = PeridynamicParams::default();
        let at = |a: f64| {
            dispersion_asymptotics(&base.with_order(AlphaOrder::new(a).unwrap())).omega_second_infty
        };
        assert!(matches!(at(0.75), SecondDerivativeInfinity::Limit { value, .. } if value < 0.0));
        match at(0.1) {
            SecondDerivativeInfinity::Oscillating { liminf, limsup, .. } => {
                assert_eq!(liminf, -limsup)
            }
            other => panic!("unexpected {other:?}"),
        }
        match at(0.5) {
            SecondDerivativeInfinity::Oscillating { liminf, limsup, .. } => {
                assert!(liminf < limsup)
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
