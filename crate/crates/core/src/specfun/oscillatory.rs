//! Far-field antiderivatives of `τ^m e^{iτ}` by repeated integration by parts.
//!
//! `Φ_m(τ) = -i e^{iτ} Σ_k i^k m(m-1)…(m-k+1) τ^{m-k}` is an asymptotic
//! expansion; for τ ≥ 40 and |m| ≤ 2 the smallest term is far below f64
//! resolution, so truncating there gives the definite integral between two
//! such points to full precision.

use num_complex::Complex64;

const MAX_TERMS: usize = 200;

pub(crate) fn antiderivative(m: f64, tau: f64) -> Complex64 {
    let lead = tau.powf(m);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut term = Complex64::new(lead, 0.0);
    let mut last = f64::INFINITY;
    for k in 0..MAX_TERMS {
        let size = term.norm();
        if size == 0.0 || size > last {
            break;
        }
        sum += term;
        if size <= 1e-18 * sum.norm() {
            break;
        }
        last = size;
        // next term: multiply by i (m - k) / τ
        term *= Complex64::new(0.0, (m - k as f64) / tau);
    }
    Complex64::new(0.0, -1.0) * Complex64::from_polar(1.0, tau) * sum
}

/// `∫_a^b τ^m e^{iτ} dτ`, with `b = ∞` allowed when `m < 0`.
pub(crate) fn definite(m: f64, a: f64, b: f64) -> Complex64 {
    let upper = if b.is_infinite() {
        Complex64::new(0.0, 0.0)
    } else {
        antiderivative(m, b)
    };
    upper - antiderivative(m, a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_power_is_exact() {
        // ∫ τ e^{iτ} = e^{iτ}(1 - iτ)
        let (a, b) = (50.0_f64, 73.0_f64);
        let exact = |t: f64| Complex64::from_polar(1.0, t) * Complex64::new(1.0, -t);
        let got = definite(1.0, a, b);
        assert!((got - (exact(b) - exact(a))).norm() < 1e-12);
    }

    #[test]
    fn matches_dirichlet_tail() {
        // ∫_40^∞ sin τ/τ = π/2 - Si(40); Si(40) = 1.5869851193547845
        let tail = definite(-1.0, 40.0, f64::INFINITY).im;
        assert!((tail - (std::f64::consts::FRAC_PI_2 - 1.586_985_119_354_784_5)).abs() < 1e-15);
    }
}
