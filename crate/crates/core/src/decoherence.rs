// Copyright 2026 The ecslab Authors
// SPDX-License-Identifier: Apache-2.0

//! Symmetric photon loss on both modes of a family state, and the overlap
//! of the decohered pair with the best maximally entangled family member.

use num_complex::Complex64;

use crate::coherent::{overlap, FamilyState, NonorthogonalDensity};
use crate::entanglement::state_fidelity;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::sweep::{logspace, SweepTable};

/// Below this `alpha0` the numeric route returns the analytic limit `eta`.
pub const MIN_NUMERIC_ALPHA0: f64 = 1e-4;

/// Transmissions plotted by default, top curve first.
pub const DEFAULT_ETAS: [f64; 5] = [0.9, 0.7, 0.5, 0.3, 0.1];

/// 150 log-spaced points on `[0.01, 3]`.
pub fn default_alpha0_grid() -> Vec<f64> {
    logspace(0.01, 3.0, 150)
}

/// A family state after both modes went through loss with the same `eta`.
#[derive(Debug, Clone)]
pub struct DecoheredPair {
    /// Unit-trace density over modes 0 and 1.
    pub rho: NonorthogonalDensity,
    /// Coherence factor `s` multiplying the off-diagonal ket-bra terms.
    pub s_factor: Complex64,
    pub eta: f64,
    pub alpha0: f64,
    pub family: FamilyState,
}

fn check_eta(eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::EtaOutOfRange(eta));
    }
    Ok(())
}

pub fn propagate(family: &FamilyState, eta: f64) -> Result<DecoheredPair> {
    check_eta(eta)?;
    let state = family.state()?;
    let lossy = state.loss_channel(0, eta)?.loss_channel(1, eta)?;
    let rho = lossy.reduced_density(&[0, 1])?.normalized()?;
    let leak = (1.0 - eta).sqrt();
    let env = overlap(family.gamma * leak, family.alpha * leak) * overlap(family.delta * leak, family.beta * leak);
    let s_factor = Complex64::from_polar(1.0, -family.gamma_phase()) * env;
    Ok(DecoheredPair { rho, s_factor, eta, alpha0: family.alpha0(), family: *family })
}

/// `[1 - e^{-4 eta a^2}][1 + e^{-4 (1-eta) a^2}] / (2 [1 - e^{-4 a^2}])`,
/// continued by its limit `eta` at `a = 0`.
pub fn fidelity_closed_form(alpha0: f64, eta: f64) -> Result<f64> {
    check_eta(eta)?;
    if !(alpha0 >= 0.0) {
        return Err(Error::InvalidParameter(format!("alpha0 = {alpha0} must be nonnegative")));
    }
    let a2 = alpha0 * alpha0;
    if a2 == 0.0 {
        return Ok(eta);
    }
    let num = -(-4.0 * eta * a2).exp_m1() * (1.0 + (-4.0 * (1.0 - eta) * a2).exp());
    // 1 - e^{-4 a^2} factored so that numerator and denominator are the same
    // floating-point expression at eta = 1/2.
    let den = -2.0 * (-2.0 * a2).exp_m1() * (1.0 + (-2.0 * a2).exp());
    Ok(num / den)
}

/// Overlap of `pair.rho` with the family member scaled by `sqrt(eta)`.
pub fn fidelity_numeric(pair: &DecoheredPair) -> Result<f64> {
    if pair.alpha0 < MIN_NUMERIC_ALPHA0 {
        return Ok(pair.eta);
    }
    // The scaled target itself degenerates; same 0/0 as above.
    if pair.alpha0 * pair.eta.sqrt() < MIN_NUMERIC_ALPHA0 {
        return fidelity_closed_form(pair.alpha0, pair.eta);
    }
    let target = pair.family.scaled(pair.eta.sqrt()).state()?;
    state_fidelity(&pair.rho, &target)
}

/// Rows `(alpha0, eta, F)` from the closed form, ordered by `eta` as given
/// and then by `alpha0`.
pub fn fig1_sweep(etas: &[f64], alpha0s: &[f64], exec: Execution) -> Result<SweepTable> {
    if etas.is_empty() || alpha0s.is_empty() {
        return Err(Error::InvalidParameter("empty sweep grid".into()));
    }
    let points: Vec<(f64, f64)> = etas.iter().flat_map(|&e| alpha0s.iter().map(move |&a| (a, e))).collect();
    let values = exec.map(&points, |&(a, e)| fidelity_closed_form(a, e));
    let mut table = SweepTable::new(&["alpha0", "eta", "fidelity"]);
    for (&(a, e), f) in points.iter().zip(values) {
        table.push(vec![a, e, f?]);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn z(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn closed_form_limits() {
        assert_abs_diff_eq!(fidelity_closed_form(0.0, 0.37).unwrap(), 0.37);
        assert_abs_diff_eq!(fidelity_closed_form(1e-5, 0.37).unwrap(), 0.37, epsilon = 1e-8);
        for a in [0.01, 0.3, 1.0, 4.0] {
            assert_eq!(fidelity_closed_form(a, 0.5).unwrap(), 0.5);
            assert_abs_diff_eq!(fidelity_closed_form(a, 1.0).unwrap(), 1.0, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(fidelity_closed_form(8.0, 0.8).unwrap(), 0.5, epsilon = 1e-12);
        assert!(fidelity_closed_form(1.0, 1.2).is_err());
        assert!(fidelity_closed_form(-1.0, 0.5).is_err());
    }

    #[test]
    fn eta_one_keeps_the_pure_state() {
        let fam = FamilyState::h(z(0.8, 0.0));
        let pair = propagate(&fam, 1.0).unwrap();
        assert_abs_diff_eq!(pair.s_factor.norm(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(fidelity_numeric(&pair).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn eta_zero_dumps_everything() {
        // Both kept kets collapse to vacuum; |s| = exp(-4 alpha0^2).
        let a0: f64 = 0.6;
        let pair = propagate(&FamilyState::h(z(a0, 0.0)), 0.0).unwrap();
        assert_abs_diff_eq!(pair.s_factor.norm(), (-4.0 * a0 * a0).exp(), epsilon = 1e-14);
        assert_eq!(pair.rho.kets().len(), 1);
        assert_abs_diff_eq!(fidelity_closed_form(a0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn s_factor_matches_rho_coefficients() {
        let fam = FamilyState::h(z(0.5, 0.2)).shifted(z(0.4, -0.1), z(-0.3, 0.6));
        let eta = 0.6;
        let pair = propagate(&fam, eta).unwrap();
        let n = -2.0 * (-4.0 * fam.alpha0().powi(2)).exp_m1();
        // rho = (1/N)[... - s |a><g| - s^* |g><a|]
        assert_abs_diff_eq!((pair.rho.coeffs()[(0, 1)] + pair.s_factor / n).norm(), 0.0, epsilon = 1e-13);
        assert!(pair.s_factor.norm() <= 1.0);
        assert_abs_diff_eq!(pair.rho.trace(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn numeric_matches_closed_form() {
        for (a0, eta) in [(1.0, 0.9), (0.3, 0.5), (2.0, 0.2), (0.05, 0.75)] {
            let pair = propagate(&FamilyState::h(z(a0, 0.0)), eta).unwrap();
            let f = fidelity_numeric(&pair).unwrap();
            assert_abs_diff_eq!(f, fidelity_closed_form(a0, eta).unwrap(), epsilon = 1e-9);
        }
        let tiny = propagate(&FamilyState::h(z(1e-5, 0.0)), 0.4);
        assert!(tiny.is_err() || fidelity_numeric(&tiny.unwrap()).unwrap() == 0.4);
    }

    #[test]
    fn fig1_rows() {
        let t = fig1_sweep(&DEFAULT_ETAS, &default_alpha0_grid(), Execution::Sequential).unwrap();
        assert_eq!(t.len(), 750);
        let half = fig1_sweep(&[0.5], &default_alpha0_grid(), Execution::Auto).unwrap();
        assert!(half.column("fidelity").unwrap().iter().all(|f| (f - 0.5).abs() < 1e-14));
        let top = fig1_sweep(&[0.9], &default_alpha0_grid(), Execution::Auto).unwrap();
        let f = top.column("fidelity").unwrap();
        assert!(f.windows(2).all(|w| w[1] < w[0]));
        assert!((f[0] - 0.9).abs() < 1e-3);
        let bottom = fig1_sweep(&[0.1], &default_alpha0_grid(), Execution::Auto).unwrap();
        let f = bottom.column("fidelity").unwrap();
        assert!(f.windows(2).all(|w| w[1] >= w[0]));
        assert!(f[149] < 0.5 && f[149] > 0.48);
        assert!(fig1_sweep(&[], &[1.0], Execution::Auto).is_err());
    }
}
