//! Discrete form of the nonunitary pair
//! `v̂(ξ) = (1/2π) ∫ v(x) e^{+ixξ} dx`, `v(x) = ∫ v̂(ξ) e^{−iξx} dξ`.
//!
//! With `x_j = −L + j dx` and `ξ_k = πk/L`, `x_j ξ_k = −πk + 2πjk/n`, so
//! `e^{+i x_j ξ_k} = (−1)^k e^{+2πijk/n}`. The forward transform is therefore
//! `(dx/2π)(−1)^k` times rustfft's *inverse* (positive-exponent) DFT at index
//! `k mod n`, and the inverse transform is `dξ` times rustfft's *forward*
//! DFT of `(−1)^k v̂_k` placed at `k mod n`.

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::SpectralGrid;
use crate::error::{Error, Result};

/// Largest tolerated `max|Im| / max|v|` after the inverse transform.
pub const IMAGINARY_RESIDUE_LIMIT: f64 = 1e-8;

/// Relative tolerance of the conjugate-symmetry check on mode arrays.
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

fn parity(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

fn check_len(len: usize, grid: &SpectralGrid) -> Result<()> {
    if len != grid.n_modes() {
        return Err(Error::LengthMismatch {
            expected: grid.n_modes(),
            got: len,
        });
    }
    Ok(())
}

/// Samples on the grid to modal coefficients `v̂(ξ_k)` in natural order.
pub fn forward_transform(samples: &[f64], grid: &SpectralGrid) -> Result<Vec<Complex64>> {
    check_len(samples.len(), grid)?;
    let n = grid.n_modes();
    let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    let scale = grid.dx() / (2.0 * std::f64::consts::PI);
    Ok((0..n)
        .map(|i| {
            let k = grid.wavenumber(i);
            buf[k.rem_euclid(n as i64) as usize] * (scale * parity(k))
        })
        .collect())
}

/// Modal coefficients back to grid samples, complex-valued.
pub fn inverse_transform_complex(
    modes: &[Complex64],
    grid: &SpectralGrid,
) -> Result<Vec<Complex64>> {
    check_len(modes.len(), grid)?;
    let n = grid.n_modes();
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (i, &m) in modes.iter().enumerate() {
        let k = grid.wavenumber(i);
        buf[k.rem_euclid(n as i64) as usize] = m * parity(k);
    }
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    let dxi = grid.dxi();
    Ok(buf.into_iter().map(|z| z * dxi).collect())
}

/// Modal coefficients back to real grid samples.
///
/// Fails with [`Error::ImaginaryResidue`] when the discarded imaginary part
/// exceeds [`IMAGINARY_RESIDUE_LIMIT`] of the peak amplitude.
pub fn inverse_transform(modes: &[Complex64], grid: &SpectralGrid) -> Result<Vec<f64>> {
    let field = inverse_transform_complex(modes, grid)?;
    let peak = field.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    let residue = field.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
    if peak > 0.0 && residue > IMAGINARY_RESIDUE_LIMIT * peak {
        return Err(Error::ImaginaryResidue {
            ratio: residue / peak,
            limit: IMAGINARY_RESIDUE_LIMIT,
        });
    }
    Ok(field.into_iter().map(|z| z.re).collect())
}

/// Worst violation of `v̂(−ξ) = conj v̂(ξ)` relative to the peak modulus.
///
/// The unpaired mode `k = −n/2` and the zero mode must be real.
pub fn hermitian_mismatch(modes: &[Complex64], grid: &SpectralGrid) -> f64 {
    let half = (grid.n_modes() / 2) as i64;
    let peak = modes.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    if peak == 0.0 {
        return 0.0;
    }
    let mut worst = modes[grid.slot(-half)].im.abs();
    for k in 0..half {
        let a = modes[grid.slot(k)];
        let b = modes[grid.slot(-k)];
        worst = worst.max((a - b.conj()).norm());
    }
    worst / peak
}

pub(crate) fn ensure_hermitian(modes: &[Complex64], grid: &SpectralGrid) -> Result<()> {
    let mismatch = hermitian_mismatch(modes, grid);
    if mismatch > HERMITIAN_TOLERANCE {
        let peak = modes.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        return Err(Error::NonHermitian { mismatch, peak });
    }
    Ok(())
}
