// Copyright 2026 The ecslab Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact algebra of finite superpositions of multi-mode coherent states.
//!
//! A state is a list of terms `coeff * |a_0, a_1, ..., a_{m-1}>`. Every map
//! implemented here (displacement, phase rotation, the 50/50 beam splitter,
//! the loss channel, photon-number projection) sends coherent kets to
//! coherent kets, so the representation is closed and all results are
//! exact up to floating-point rounding. Non-orthogonality of the kets is
//! carried explicitly through [`GramMatrix`].

mod density;
mod family;
mod ops;
mod state;

pub use density::{GramMatrix, NonorthogonalDensity};
pub use family::FamilyState;
pub use ops::{BeamSplitterConvention, Conventions, DisplacementPhase};
pub use state::{CoherentSuperposition, CoherentTerm};

use num_complex::Complex64;

/// Squared norms at or below this are treated as a null superposition.
pub const NORM_SQ_FLOOR: f64 = 1e-14;

/// Absolute per-component tolerance under which two kets are merged.
pub const DEDUP_TOL: f64 = 1e-12;

/// Single-mode coherent overlap `<a|b>`.
pub fn overlap(a: Complex64, b: Complex64) -> Complex64 {
    (-0.5 * a.norm_sqr() - 0.5 * b.norm_sqr() + a.conj() * b).exp()
}

/// `c_alpha = <alpha|-alpha> = exp(-2|alpha|^2)`.
pub fn cat_overlap(alpha: Complex64) -> f64 {
    (-2.0 * alpha.norm_sqr()).exp()
}

/// `1 - c_alpha`, accurate for small amplitudes.
pub(crate) fn one_minus_cat_overlap(alpha: Complex64) -> f64 {
    -(-2.0 * alpha.norm_sqr()).exp_m1()
}

/// Number-basis amplitude `<n|a> = exp(-|a|^2/2) a^n / sqrt(n!)`.
pub fn number_amplitude(a: Complex64, n: usize) -> Complex64 {
    let r = a.norm();
    if r == 0.0 {
        return if n == 0 { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
    }
    let log_mag = -0.5 * r * r + n as f64 * r.ln() - 0.5 * ln_factorial(n);
    Complex64::from_polar(log_mag.exp(), n as f64 * a.arg())
}

pub(crate) fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

pub(crate) fn amps_close(a: &[Complex64], b: &[Complex64]) -> bool {
    a.iter()
        .zip(b)
        .all(|(x, y)| (x.re - y.re).abs() <= DEDUP_TOL && (x.im - y.im).abs() <= DEDUP_TOL)
}

/// Product of single-mode overlaps `<a|b>` across all modes.
pub(crate) fn product_overlap(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter()
        .zip(b)
        .fold(Complex64::new(1.0, 0.0), |acc, (x, y)| acc * overlap(*x, *y))
}
