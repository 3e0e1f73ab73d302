mod common;

use common::{oracle_omega_sq, rel, richardson};
use peridisp::dispersion::{
    classical_limit_ratio, dispersion_asymptotics, omega, omega_prime, omega_prime_explicit,
    omega_second, omega_second_via_cosine, omega_sq, omega_sq_quadrature, omega_sq_series,
    omega_sq_upper_bound, second_derivative_zeros, PeridynamicParams, SecondDerivativeInfinity,
};
use peridisp::specfun::AlphaOrder;
use peridisp::Error;
use proptest::prelude::*;

fn params(alpha: f64) -> PeridynamicParams {
    PeridynamicParams::with_alpha(0.5, 1.0, 1.0, alpha).unwrap()
}

#[test]
fn matches_defining_integral() {
    let cases = [
        (1.0, 0.5, 1.0, 1.0, 0.1),
        (1.0, 0.5, 1.0, 1.0, 0.75),
        (3.7, 2.0, 0.7, 1.3, 0.4),
        (25.0, 1.0, 1.0, 0.5, 0.6),
        (0.05, 0.5, 1.0, 2.5, 0.9),
    ];
    for (xi, k, r, d, a) in cases {
        let p = PeridynamicParams::with_alpha(k, r, d, a).unwrap();
        let got = omega_sq(xi, &p).unwrap();
        let want = oracle_omega_sq(xi, k, r, d, a);
        assert!(rel(got, want) < 1e-10, "xi={xi} alpha={a}: {got} vs {want}");
    }
}

#[test]
fn series_and_quadrature_agree_below_cutover_limit() {
    for &a in &[0.1, 0.5, 0.9] {
        let p = params(a);
        for &xi in &[0.01, 0.7, 5.0, 10.0, 20.0, 50.0] {
            let s = omega_sq_series(xi, &p).unwrap();
            let q = omega_sq_quadrature(xi, &p).unwrap();
            assert!(rel(s, q) < 1e-12, "alpha={a} xi={xi}");
        }
    }
}

#[test]
fn series_refuses_large_arguments() {
    assert!(matches!(
        omega_sq_series(61.0, &params(0.3)),
        Err(Error::Domain(_))
    ));
    assert!(omega_sq(1e6, &params(0.3)).is_ok());
}

#[test]
fn low_frequency_limit_and_correction() {
    let p = PeridynamicParams::default();
    let xi = 1e-3;
    let ratio = omega_sq(xi, &p).unwrap() / (xi * xi);
    assert!((ratio - 5.0 / 9.0).abs() < 1e-5);
    let measured = (ratio - 5.0 / 9.0) / (xi * xi);
    let c = 1.0 - p.alpha();
    let predicted = -c / (12.0 * (2.0 - p.alpha())) * (5.0 / 9.0);
    assert!(rel(measured, predicted) < 0.05, "{measured} vs {predicted}");
}

#[test]
fn limits_at_zero() {
    let p = PeridynamicParams::default();
    let asy = dispersion_asymptotics(&p);
    assert!((asy.low_freq_slope_sq - 5.0 / 9.0).abs() < 1e-15);
    assert!((omega_prime(1e-4, &p).unwrap() - (5.0f64 / 9.0).sqrt()).abs() < 1e-4);
    let second = omega_second(1e-3, &p).unwrap() / 1e-3;
    assert!((second - asy.omega_second_over_xi_at_zero).abs() < 1e-4);
    assert!((second + 0.08827).abs() < 1e-4);
}

#[test]
fn derivatives_match_finite_differences() {
    for &a in &[0.1, 0.5, 0.75] {
        let p = params(a);
        for &xi in &[0.3, 1.0, 4.0, 17.0] {
            let w = |x: f64| omega(x, &p).unwrap();
            let wp = |x: f64| omega_prime(x, &p).unwrap();
            let fd1 = richardson(&w, xi, 1e-3);
            let fd2 = richardson(&wp, xi, 1e-3);
            assert!((omega_prime(xi, &p).unwrap() - fd1).abs() < 1e-8 * (1.0 + fd1.abs()));
            assert!((omega_second(xi, &p).unwrap() - fd2).abs() < 1e-7 * (1.0 + fd2.abs()));
        }
    }
}

#[test]
fn upper_bound_dominates_on_log_grid() {
    for &a in &[0.05, 0.3, 0.5, 0.8, 0.95] {
        let p = PeridynamicParams::with_alpha(0.8, 1.2, 0.6, a).unwrap();
        for i in -40..=100 {
            let xi = 10f64.powf(i as f64 / 10.0);
            assert!(omega_sq(xi, &p).unwrap() <= omega_sq_upper_bound(xi, &p) * (1.0 + 1e-12));
        }
    }
}

#[test]
fn high_frequency_coefficients() {
    let p = params(0.75);
    let asy = dispersion_asymptotics(&p);
    let xi = 1e6_f64;
    let lead = xi.powf(-1.5) * omega_sq(xi, &p).unwrap();
    assert!(rel(lead, asy.high_freq_coeff_sq) < 1e-3);
    let group = xi.powf(0.25) * omega_prime(xi, &p).unwrap();
    assert!(rel(group, asy.omega_prime_infty_coeff) < 1e-3);
    match asy.omega_second_infty {
        SecondDerivativeInfinity::Limit { exponent, value } => {
            assert_eq!(exponent, 1.25);
            let scaled = 1e5f64.powf(exponent) * omega_second(1e5, &p).unwrap();
            assert!(rel(scaled, value) < 1e-2);
        }
        other => panic!("expected a limit, got {other:?}"),
    }
}

#[test]
fn half_order_envelope() {
    let p = params(0.5);
    let SecondDerivativeInfinity::Oscillating {
        exponent,
        liminf,
        limsup,
    } = dispersion_asymptotics(&p).omega_second_infty
    else {
        panic!("alpha = 1/2 oscillates");
    };
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..4000 {
        let xi = 1e5 + 0.01 * i as f64;
        let v = xi.powf(exponent) * omega_second(xi, &p).unwrap();
        lo = lo.min(v);
        hi = hi.max(v);
    }
    assert!((lo - liminf).abs() < 0.02 * liminf.abs());
    assert!((hi - limsup).abs() < 0.02 * liminf.abs());
}

#[test]
fn second_derivative_sign_regimes() {
    assert!(
        second_derivative_zeros(50.0, 100.0, &params(0.1))
            .unwrap()
            .len()
            >= 10
    );
    assert!(
        second_derivative_zeros(20.0, 200.0, &params(0.5))
            .unwrap()
            .len()
            >= 10
    );
    assert!(second_derivative_zeros(50.0, 100.0, &params(0.75))
        .unwrap()
        .is_empty());
    for z in second_derivative_zeros(50.0, 60.0, &params(0.1)).unwrap() {
        assert!(omega_second(z, &params(0.1)).unwrap().abs() < 1e-9);
    }
}

#[test]
fn near_classical_ratio_tends_to_one() {
    let p = PeridynamicParams::default().with_order(AlphaOrder::from_complement(1e-8).unwrap());
    for &xi in &[1.0, 10.0, 100.0] {
        assert!((classical_limit_ratio(xi, &p).unwrap() - 1.0).abs() < 1e-6);
    }
}

#[test]
fn derivatives_reject_zero() {
    let p = PeridynamicParams::default();
    assert!(omega_prime(0.0, &p).is_err());
    assert!(omega_second(0.0, &p).is_err());
    assert_eq!(omega_sq(0.0, &p).unwrap(), 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parity(xi in 0.01f64..500.0, a in 0.05f64..0.95) {
        let p = params(a);
        prop_assert!((omega_sq(xi, &p).unwrap() - omega_sq(-xi, &p).unwrap()).abs() <= 1e-12 * omega_sq(xi, &p).unwrap());
        prop_assert!((omega_prime(xi, &p).unwrap() + omega_prime(-xi, &p).unwrap()).abs() <= 1e-12);
        prop_assert!((omega_second(xi, &p).unwrap() - omega_second(-xi, &p).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn independent_derivative_routes_agree(xi in 0.05f64..300.0, a in 0.05f64..0.95) {
        let p = params(a);
        let v1 = omega_prime(xi, &p).unwrap();
        let v2 = omega_prime_explicit(xi, &p).unwrap();
        prop_assert!((v1 - v2).abs() < 1e-10 * (1.0 + v1.abs()));
        let s1 = omega_second(xi, &p).unwrap();
        let s2 = omega_second_via_cosine(xi, &p).unwrap();
        prop_assert!((s1 - s2).abs() < 1e-8 * (1.0 + s1.abs()), "{} vs {}", s1, s2);
    }

    #[test]
    fn scaling_law(xi in 0.01f64..200.0, k in 0.1f64..5.0, r in 0.1f64..5.0, d in 0.1f64..3.0, a in 0.05f64..0.95) {
        // ω²(ξ; κ, ρ, δ) = (κ/ρ) δ^{−2α} ω²(ξδ; 1, 1, 1).
        let p = PeridynamicParams::with_alpha(k, r, d, a).unwrap();
        let unit = PeridynamicParams::with_alpha(1.0, 1.0, 1.0, a).unwrap();
        let lhs = omega_sq(xi, &p).unwrap();
        let rhs = k / r * d.powf(-2.0 * a) * omega_sq(xi * d, &unit).unwrap();
        prop_assert!(rel(lhs, rhs) < 1e-12);
    }
}
