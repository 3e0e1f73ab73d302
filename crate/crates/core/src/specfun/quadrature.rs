//! Globally adaptive Gauss-Kronrod (7/15) quadrature.
//!
//! The interval list is seeded with caller-chosen panels (e.g. one per
//! half-period of an oscillatory integrand) and the panel with the largest
//! error estimate is bisected until the summed estimate meets the tolerance.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances and subdivision budget.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureTolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for QuadratureTolerance {
    fn default() -> Self {
        Self {
            abs: 1e-300,
            rel: 1e-13,
            max_intervals: 4000,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct QuadratureResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    magnitude: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut pairs = [(0.0, 0.0); 7];
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let (f1, f2) = (f(center - dx), f(center + dx));
        pairs[j] = (f1, f2);
        kronrod += w * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    let mut magnitude = WGK[7] * fc.abs();
    for (j, &(f1, f2)) in pairs.iter().enumerate() {
        asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
        magnitude += WGK[j] * (f1.abs() + f2.abs());
    }
    let value = kronrod * half;
    let asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    // QUADPACK rescaling of the Gauss/Kronrod difference.
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    error = error.max(50.0 * f64::EPSILON * value.abs());
    Panel {
        a,
        b,
        value,
        magnitude: magnitude * half.abs(),
        error,
    }
}

/// Integrates `f` over the union of consecutive panels given by `breaks`
/// (sorted, at least two entries).
pub fn integrate_panels<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    tol: QuadratureTolerance,
) -> Result<QuadratureResult> {
    if breaks.len() < 2 {
        return Ok(QuadratureResult {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        });
    }
    let mut heap = BinaryHeap::with_capacity(2 * breaks.len());
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            heap.push(gauss_kronrod_15(&f, w[0], w[1]));
        }
    }
    loop {
        let (value, magnitude, error) = heap.iter().fold((0.0, 0.0, 0.0), |(v, m, e), p| {
            (v + p.value, m + p.magnitude, e + p.error)
        });
        // The roundoff floor keeps cancelling oscillatory integrals from
        // chasing a relative tolerance on a near-zero result.
        let floor = 100.0 * f64::EPSILON * magnitude;
        if error <= tol.abs.max(tol.rel * value.abs()).max(floor) {
            return Ok(QuadratureResult {
                value,
                error,
                intervals: heap.len(),
            });
        }
        let worst = match heap.pop() {
            Some(p) => p,
            None => {
                return Ok(QuadratureResult {
                    value,
                    error,
                    intervals: 0,
                })
            }
        };
        let mid = 0.5 * (worst.a + worst.b);
        if heap.len() + 2 > tol.max_intervals || mid <= worst.a || mid >= worst.b {
            return Err(Error::QuadratureBudget {
                a: breaks[0],
                b: breaks[breaks.len() - 1],
                estimate: error,
            });
        }
        heap.push(gauss_kronrod_15(&f, worst.a, mid));
        heap.push(gauss_kronrod_15(&f, mid, worst.b));
    }
}

/// Integrates `f` over `[a, b]` with panels no wider than `max_width`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    max_width: f64,
    tol: QuadratureTolerance,
) -> Result<QuadratureResult> {
    let breaks = uniform_breaks(a, b, max_width);
    integrate_panels(f, &breaks, tol)
}

pub(crate) fn uniform_breaks(a: f64, b: f64, max_width: f64) -> Vec<f64> {
    if b <= a {
        return vec![a, a];
    }
    let n = ((b - a) / max_width).ceil().max(1.0) as usize;
    let h = (b - a) / n as f64;
    let mut breaks: Vec<f64> = (0..n).map(|i| a + i as f64 * h).collect();
    breaks.push(b);
    breaks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x| x.powi(6) - 3.0 * x, 0.0, 2.0, 10.0, Default::default()).unwrap();
        assert!((r.value - (128.0 / 7.0 - 6.0)).abs() < 1e-13);
    }

    #[test]
    fn oscillatory_panels() {
        let r = integrate(
            f64::sin,
            0.0,
            40.0 * std::f64::consts::PI,
            3.0,
            Default::default(),
        )
        .unwrap();
        assert!(r.value.abs() < 1e-12);
    }

    #[test]
    fn log_singularity_converges() {
        let r = integrate(|x: f64| x.ln(), 0.0, 1.0, 1.0, Default::default()).unwrap();
        assert!((r.value + 1.0).abs() < 1e-11);
    }

    #[test]
    fn non_integrable_exhausts_budget() {
        let tol = QuadratureTolerance {
            max_intervals: 200,
            ..Default::default()
        };
        let r = integrate(|x: f64| 1.0 / x, 0.0, 1.0, 1.0, tol);
        assert!(matches!(r, Err(Error::QuadratureBudget { .. })));
    }
}
