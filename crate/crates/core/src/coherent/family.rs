// Copyright 2026 The ecslab Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;

use super::state::{CoherentSuperposition, CoherentTerm};
use super::NORM_SQ_FLOOR;
use crate::error::{Error, Result};

/// Tolerance on `|alpha - gamma| = |beta - delta|`.
pub const FAMILY_CONSTRAINT_TOL: f64 = 1e-9;

/// Parameters of the two-mode family
/// `(|alpha, beta> - e^{i Gamma} |gamma, delta>) / sqrt(N_{alpha0})`,
/// with `|alpha - gamma| = |beta - delta| = 2 alpha0` and
/// `Gamma = Im(beta delta^* + alpha gamma^*)`.
///
/// Every member is `|H_{alpha0}>` up to local displacements and phase
/// shifts, so all of them carry exactly one ebit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyState {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
    pub delta: Complex64,
}

impl FamilyState {
    pub fn new(alpha: Complex64, beta: Complex64, gamma: Complex64, delta: Complex64) -> Result<Self> {
        let lhs = (alpha - gamma).norm();
        let rhs = (beta - delta).norm();
        if (lhs - rhs).abs() > FAMILY_CONSTRAINT_TOL {
            return Err(Error::ConstraintViolated { lhs, rhs });
        }
        Ok(Self { alpha, beta, gamma, delta })
    }

    /// The member `(alpha, alpha, -alpha, -alpha)`, i.e. `|H_alpha>`.
    pub fn h(alpha: Complex64) -> Self {
        Self { alpha, beta: alpha, gamma: -alpha, delta: -alpha }
    }

    pub fn alpha0(&self) -> f64 {
        0.5 * (self.alpha - self.gamma).norm()
    }

    pub fn gamma_phase(&self) -> f64 {
        (self.beta * self.delta.conj() + self.alpha * self.gamma.conj()).im
    }

    /// All four amplitudes multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        Self { alpha: self.alpha * k, beta: self.beta * k, gamma: self.gamma * k, delta: self.delta * k }
    }

    /// Shifts mode 0 by `shift0` and mode 1 by `shift1`.
    pub fn shifted(&self, shift0: Complex64, shift1: Complex64) -> Self {
        Self {
            alpha: self.alpha + shift0,
            beta: self.beta + shift1,
            gamma: self.gamma + shift0,
            delta: self.delta + shift1,
        }
    }

    pub fn state(&self) -> Result<CoherentSuperposition> {
        let a0 = self.alpha0();
        let norm = -2.0 * (-4.0 * a0 * a0).exp_m1();
        self.build(-1.0, norm)
    }

    /// The even-parity partner `(|alpha, beta> + e^{i Gamma} |gamma, delta>) /
    /// sqrt(2 + 2 e^{-4 alpha0^2})`, i.e. the same local displacements and
    /// phase shifts applied to `|G_{alpha0}>`.
    pub fn even_state(&self) -> Result<CoherentSuperposition> {
        let a0 = self.alpha0();
        self.build(1.0, 2.0 + 2.0 * (-4.0 * a0 * a0).exp())
    }

    fn build(&self, sign: f64, norm: f64) -> Result<CoherentSuperposition> {
        if !(norm > NORM_SQ_FLOOR) {
            return Err(Error::NormTooSmall { norm_sq: norm });
        }
        let k = 1.0 / norm.sqrt();
        let phase = Complex64::from_polar(1.0, self.gamma_phase());
        Ok(CoherentSuperposition::from_parts(
            2,
            vec![
                CoherentTerm::new(Complex64::new(k, 0.0), vec![self.alpha, self.beta]),
                CoherentTerm::new(phase * (sign * k), vec![self.gamma, self.delta]),
            ],
        )
        .merged())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn z(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn h_member_matches_h() {
        let a = z(0.9, -0.3);
        let fam = FamilyState::new(a, a, -a, -a).unwrap();
        assert_abs_diff_eq!(fam.gamma_phase(), 0.0, epsilon = 1e-15);
        let h = CoherentSuperposition::entangled_h(a).unwrap();
        let ip = fam.state().unwrap().inner_product(&h).unwrap();
        assert_abs_diff_eq!(ip.re, 1.0, epsilon = 1e-13);
    }

    #[test]
    fn displaced_h_is_a_family_member() {
        let a = z(0.7, 0.0);
        let b0 = z(0.4, 0.6);
        let fam = FamilyState::new(a + b0, a, -a + b0, -a).unwrap();
        let disp = CoherentSuperposition::entangled_h(a).unwrap().displace(0, b0).unwrap();
        let ip = fam.state().unwrap().inner_product(&disp).unwrap();
        assert_abs_diff_eq!(ip.norm(), 1.0, epsilon = 1e-13);
    }

    #[test]
    fn every_member_is_normalized() {
        let fam = FamilyState::h(z(0.5, 0.2)).shifted(z(-1.0, 0.3), z(0.2, 0.9));
        assert_abs_diff_eq!(fam.state().unwrap().norm_sqr(), 1.0, epsilon = 1e-13);
    }

    #[test]
    fn even_partner_of_h_member_is_g() {
        let a = z(0.8, 0.1);
        let even = FamilyState::h(a).even_state().unwrap();
        let g = CoherentSuperposition::entangled_g(a);
        assert_abs_diff_eq!(even.inner_product(&g).unwrap().re, 1.0, epsilon = 1e-13);
        let shifted = FamilyState::h(a).shifted(z(0.3, 0.2), z(-0.5, 0.0)).even_state().unwrap();
        let moved = g.displace(0, z(0.3, 0.2)).unwrap().displace(1, z(-0.5, 0.0)).unwrap();
        assert_abs_diff_eq!(shifted.inner_product(&moved).unwrap().norm(), 1.0, epsilon = 1e-13);
    }

    #[test]
    fn constraint_violation() {
        let r = FamilyState::new(z(1.0, 0.0), z(1.0, 0.0), z(-1.0, 0.0), z(0.0, 0.0));
        assert!(matches!(r, Err(Error::ConstraintViolated { .. })));
    }
}
