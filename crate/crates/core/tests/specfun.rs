mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use common::{oracle_c, oracle_f, oracle_s, rel};
use peridisp::specfun::{
    gamma::gamma, gamma_reflection_value, improper_sine_integral_j, partial_cosine_integral_c,
    partial_sine_integral_s, partial_trig_integral_f, trig_integral_i, AlphaOrder,
};
use proptest::prelude::*;

fn order(a: f64) -> AlphaOrder {
    AlphaOrder::new(a).unwrap()
}

#[test]
fn partial_integrals_match_simpson_oracle() {
    for &a in &[0.05, 0.1, 0.3, 0.5, 0.7, 0.9] {
        for &t in &[0.1, 0.5, 1.0, 2.5, 7.0, 19.0, 33.0] {
            let f = partial_trig_integral_f(order(a), t).unwrap();
            let s = partial_sine_integral_s(order(a), t).unwrap();
            let c = partial_cosine_integral_c(order(a), t).unwrap();
            assert!(rel(f, oracle_f(a, t)) < 1e-10, "F({a},{t})");
            assert!(
                (s - oracle_s(a, t)).abs() < 1e-10 * (1.0 + s.abs()),
                "S({a},{t})"
            );
            assert!(
                (c - oracle_c(a, t)).abs() < 1e-9 * (1.0 + c.abs()),
                "C({a},{t})"
            );
        }
    }
}

#[test]
fn far_field_agrees_with_direct_quadrature() {
    // Past the switch to the asymptotic expansion.
    for &a in &[0.1, 0.5, 0.8] {
        for &t in &[45.0, 80.0] {
            let f = partial_trig_integral_f(order(a), t).unwrap();
            assert!(rel(f, oracle_f(a, t)) < 1e-9, "F({a},{t})");
            let s = partial_sine_integral_s(order(a), t).unwrap();
            assert!((s - oracle_s(a, t)).abs() < 1e-9, "S({a},{t})");
        }
    }
}

#[test]
fn gamma_known_values() {
    assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-14);
    assert!((gamma(1.0) - 1.0).abs() < 1e-15);
    assert!((gamma(1.5) - 0.5 * PI.sqrt()).abs() < 1e-14);
    assert!((gamma(5.0) - 24.0).abs() < 1e-12);
}

#[test]
fn complete_integral_matches_gamma_form() {
    for i in 1..20 {
        let a = 0.05 * i as f64;
        let q = trig_integral_i(order(a)).unwrap();
        let g = gamma_reflection_value(order(a));
        // Independent closed form −cos(πα)Γ(−2α) via Γ(1−2α)/(−2α) away from α=1/2.
        if (a - 0.5).abs() > 1e-9 && a < 0.5 {
            let direct = -(PI * a).cos() * gamma(1.0 - 2.0 * a) / (-2.0 * a);
            assert!(rel(g, direct) < 1e-12, "alpha={a}");
        }
        assert!(rel(q, g) < 1e-12, "alpha={a}: {q} vs {g}");
    }
    assert!((gamma_reflection_value(order(0.5)) - FRAC_PI_2).abs() < 1e-12);
}

#[test]
fn dirichlet_integral_at_half() {
    // J(1/2) = ∫₀^∞ sin τ/τ dτ = π/2; partial sums over half periods
    // oscillate around it with decreasing amplitude.
    let j = improper_sine_integral_j(order(0.5)).unwrap();
    assert!((j - FRAC_PI_2).abs() < 1e-12);
    let mut prev = f64::INFINITY;
    for n in 1..40 {
        let s = partial_sine_integral_s(order(0.5), n as f64 * PI).unwrap();
        let gap = (s - j).abs();
        assert!(gap < prev);
        assert!(gap < 1.0 / (n as f64 * PI) + 1e-12);
        prev = gap;
    }
}

#[test]
fn nearly_classical_order_grows_like_inverse_complement() {
    // I(α) ~ 1/(4(1−α)) as α → 1.
    for &c in &[1e-3, 1e-6, 1e-10, 1e-20] {
        let a = AlphaOrder::from_complement(c).unwrap();
        let q = trig_integral_i(a).unwrap();
        assert!(rel(q, gamma_reflection_value(a)) < 1e-10);
        assert!(rel(q * 4.0 * c, 1.0) < 5.0 * c.max(1e-14));
    }
}

#[test]
fn tail_bound_for_large_cutoff() {
    // 0 ≤ I − F(T) ≤ 2/(2α T^{2α}).
    for &a in &[0.1, 0.4, 0.75] {
        let q = trig_integral_i(order(a)).unwrap();
        for &t in &[5.0, 50.0, 500.0, 5e4] {
            let f = partial_trig_integral_f(order(a), t).unwrap();
            let gap = q - f;
            assert!(
                gap >= -1e-12 && gap <= t.powf(-2.0 * a) / a + 1e-12,
                "a={a} t={t}"
            );
        }
    }
}

#[test]
fn sine_integral_bounded_for_high_orders() {
    for &a in &[0.5, 0.6, 0.9] {
        let j = improper_sine_integral_j(order(a)).unwrap();
        for i in 0..200 {
            let t = 0.5 + 5.0 * i as f64;
            let s = partial_sine_integral_s(order(a), t).unwrap();
            assert!(s.abs() <= j + 2.0, "a={a} t={t}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn f_is_monotone_and_below_complete(a in 0.02f64..0.98, t in 0.01f64..200.0, dt in 0.001f64..5.0) {
        let f1 = partial_trig_integral_f(order(a), t).unwrap();
        let f2 = partial_trig_integral_f(order(a), t + dt).unwrap();
        let q = trig_integral_i(order(a)).unwrap();
        prop_assert!(f1 >= 0.0);
        prop_assert!(f2 >= f1 * (1.0 - 1e-13));
        prop_assert!(f2 <= q * (1.0 + 1e-13));
    }

    #[test]
    fn derivative_identity(a in 0.05f64..0.95, t in 0.5f64..100.0) {
        // S(α,T) = 2α F(α,T) + (1 − cos T)/T^{2α}, from one integration by parts.
        let f = partial_trig_integral_f(order(a), t).unwrap();
        let s = partial_sine_integral_s(order(a), t).unwrap();
        let rhs = 2.0 * a * f + (1.0 - t.cos()) / t.powf(2.0 * a);
        prop_assert!((s - rhs).abs() < 1e-12 * (1.0 + s.abs()));
    }

    #[test]
    fn cosine_integral_by_parts(a in 0.05f64..0.95, t in 0.5f64..100.0) {
        // C(α,T) = T^{1−2α} sin T − (1−2α) S(α,T).
        let c = partial_cosine_integral_c(order(a), t).unwrap();
        let s = partial_sine_integral_s(order(a), t).unwrap();
        let rhs = t.powf(1.0 - 2.0 * a) * t.sin() - (1.0 - 2.0 * a) * s;
        prop_assert!((c - rhs).abs() < 1e-11 * (1.0 + t.powf(1.0 - 2.0 * a)));
    }
}
