//! Numerical laboratory for the one-dimensional linear peridynamic wave equation
//!
//! `ρ u_tt = −2κ ∫_{−δ}^{δ} (u(t,x) − u(t,x−y)) / |y|^{1+2α} dy` (principal value),
//! solved exactly in time, mode by mode.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dispersion;
pub mod error;
pub mod experiments;
pub mod observables;
pub mod specfun;
pub mod spectral;

pub use error::{Error, Result};
