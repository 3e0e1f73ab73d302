//! Independent reference computations shared by the integration tests.
//!
//! Nothing here calls into the library's quadrature or series code.

#![allow(dead_code)]

/// Adaptive Simpson with Richardson correction.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol.max(1e-13 * whole.abs()) {
            return left + right + delta / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    rec(f, a, b, fa, fm, fb, whole, tol, 26)
}

/// Simpson over unit-length pieces, to keep each piece well resolved.
pub fn simpson_pieces<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let n = (b - a).ceil().max(1.0) as usize;
    let h = (b - a) / n as f64;
    (0..n)
        .map(|i| simpson(f, a + i as f64 * h, a + (i + 1) as f64 * h, tol / n as f64))
        .sum()
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

const HEAD: f64 = 0.25;

/// `∫₀^ε (1 − cos τ)/τ^{1+2α}` from the termwise-integrated Taylor series.
pub fn head_one_minus_cos(alpha: f64, eps: f64) -> f64 {
    (1..30)
        .map(|k| {
            let p = 2.0 * k as f64 - 2.0 * alpha;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sign * eps.powf(p) / (factorial(2 * k) * p)
        })
        .sum()
}

pub fn head_sine(alpha: f64, eps: f64) -> f64 {
    (0..30)
        .map(|k| {
            let p = 2.0 * k as f64 + 2.0 - 2.0 * alpha;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * eps.powf(p) / (factorial(2 * k + 1) * p)
        })
        .sum()
}

pub fn head_cosine(alpha: f64, eps: f64) -> f64 {
    (0..30)
        .map(|k| {
            let p = 2.0 * k as f64 + 2.0 - 2.0 * alpha;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * eps.powf(p) / (factorial(2 * k) * p)
        })
        .sum()
}

pub fn oracle_f(alpha: f64, t: f64) -> f64 {
    let eps = HEAD.min(t);
    head_one_minus_cos(alpha, eps)
        + simpson_pieces(
            &|x: f64| 2.0 * (0.5 * x).sin().powi(2) / x.powf(1.0 + 2.0 * alpha),
            eps,
            t,
            1e-14,
        )
}

pub fn oracle_s(alpha: f64, t: f64) -> f64 {
    let eps = HEAD.min(t);
    head_sine(alpha, eps) + simpson_pieces(&|x: f64| x.sin() / x.powf(2.0 * alpha), eps, t, 1e-14)
}

pub fn oracle_c(alpha: f64, t: f64) -> f64 {
    let eps = HEAD.min(t);
    head_cosine(alpha, eps)
        + simpson_pieces(&|x: f64| x.cos() * x.powf(1.0 - 2.0 * alpha), eps, t, 1e-14)
}

/// `ω²(ξ)` from the defining integral, substituting `τ = |ξ|y`.
pub fn oracle_omega_sq(xi: f64, kappa: f64, rho: f64, delta: f64, alpha: f64) -> f64 {
    // (2κ/ρ) ∫_{−δ}^{δ} (1 − cos ξy)/|y|^{1+2α} dy
    4.0 * kappa / rho * xi.abs().powf(2.0 * alpha) * oracle_f(alpha, xi.abs() * delta)
}

/// Central difference refined by one Richardson step.
pub fn richardson<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    let d = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
    (4.0 * d(0.5 * h) - d(h)) / 3.0
}

/// Second central difference refined by one Richardson step.
pub fn richardson_second<F: Fn(f64) -> f64>(f: &F, x: f64, h: f64) -> f64 {
    let d = |h: f64| (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
    (4.0 * d(0.5 * h) - d(h)) / 3.0
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}
