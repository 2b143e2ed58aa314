// Copyright 2026 The ecslab Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{amps_close, cat_overlap, one_minus_cat_overlap, product_overlap, NORM_SQ_FLOOR};
use crate::error::{Error, Result};

/// One product ket `coeff * |amps[0]> |amps[1]> ...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherentTerm {
    pub coeff: Complex64,
    pub amps: Vec<Complex64>,
}

impl CoherentTerm {
    pub fn new(coeff: Complex64, amps: Vec<Complex64>) -> Self {
        Self { coeff, amps }
    }
}

/// A finite weighted sum of `n_modes`-mode coherent states.
///
/// A zero-mode superposition is a plain scalar; it is what is left after
/// projecting out every mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoherentSuperposition {
    n_modes: usize,
    terms: Vec<CoherentTerm>,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

impl CoherentSuperposition {
    pub fn new(n_modes: usize, terms: Vec<CoherentTerm>) -> Result<Self> {
        for t in &terms {
            if t.amps.len() != n_modes {
                return Err(Error::ModeMismatch { left: n_modes, right: t.amps.len() });
            }
            let finite = t.coeff.is_finite() && t.amps.iter().all(|a| a.is_finite());
            if !finite {
                return Err(Error::InvalidParameter("non-finite amplitude or coefficient".into()));
            }
        }
        Ok(Self { n_modes, terms })
    }

    pub(crate) fn from_parts(n_modes: usize, terms: Vec<CoherentTerm>) -> Self {
        debug_assert!(terms.iter().all(|t| t.amps.len() == n_modes));
        Self { n_modes, terms }
    }

    /// The product coherent state `|amps[0]> |amps[1]> ...`.
    pub fn product(amps: &[Complex64]) -> Self {
        Self::from_parts(amps.len(), vec![CoherentTerm::new(c(1.0), amps.to_vec())])
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn terms(&self) -> &[CoherentTerm] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<CoherentTerm> {
        self.terms
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        if self.n_modes != other.n_modes {
            return Err(Error::ModeMismatch { left: self.n_modes, right: other.n_modes });
        }
        Ok(self.inner_unchecked(other))
    }

    pub(crate) fn inner_unchecked(&self, other: &Self) -> Complex64 {
        let mut sum = c(0.0);
        for s in &self.terms {
            for t in &other.terms {
                sum += s.coeff.conj() * t.coeff * product_overlap(&s.amps, &t.amps);
            }
        }
        sum
    }

    pub fn norm_sqr(&self) -> f64 {
        self.inner_unchecked(self).re
    }

    pub fn normalize(&self) -> Result<Self> {
        let norm_sq = self.norm_sqr();
        if !(norm_sq > NORM_SQ_FLOOR) {
            return Err(Error::NormTooSmall { norm_sq });
        }
        Ok(self.scaled(c(1.0 / norm_sq.sqrt())))
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| CoherentTerm::new(t.coeff * factor, t.amps.clone()))
            .collect();
        Self::from_parts(self.n_modes, terms)
    }

    /// `self + other`, merging coincident kets.
    pub fn superpose(&self, other: &Self) -> Result<Self> {
        if self.n_modes != other.n_modes {
            return Err(Error::ModeMismatch { left: self.n_modes, right: other.n_modes });
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self::from_parts(self.n_modes, terms).merged())
    }

    /// Tensor product; `other`'s modes follow `self`'s.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for s in &self.terms {
            for t in &other.terms {
                let mut amps = s.amps.clone();
                amps.extend_from_slice(&t.amps);
                terms.push(CoherentTerm::new(s.coeff * t.coeff, amps));
            }
        }
        Self::from_parts(self.n_modes + other.n_modes, terms).merged()
    }

    /// Merges terms whose kets agree within [`super::DEDUP_TOL`] and drops
    /// terms whose coefficient is exactly zero.
    pub fn merged(self) -> Self {
        let n_modes = self.n_modes;
        let mut out: Vec<CoherentTerm> = Vec::with_capacity(self.terms.len());
        for t in self.terms {
            if t.coeff == c(0.0) {
                continue;
            }
            match out.iter_mut().find(|o| amps_close(&o.amps, &t.amps)) {
                Some(o) => o.coeff += t.coeff,
                None => out.push(t),
            }
        }
        out.retain(|t| t.coeff != c(0.0));
        Self::from_parts(n_modes, out)
    }

    /// `<a^dagger a>` on `mode`, for the normalized state.
    pub fn mean_photon_number(&self, mode: usize) -> Result<f64> {
        self.check_mode(mode)?;
        let norm_sq = self.norm_sqr();
        if !(norm_sq > NORM_SQ_FLOOR) {
            return Err(Error::NormTooSmall { norm_sq });
        }
        let mut sum = c(0.0);
        for s in &self.terms {
            for t in &self.terms {
                sum += s.coeff.conj()
                    * t.coeff
                    * s.amps[mode].conj()
                    * t.amps[mode]
                    * product_overlap(&s.amps, &t.amps);
            }
        }
        Ok(sum.re / norm_sq)
    }

    /// Total photon number summed over every mode.
    pub fn total_mean_photon_number(&self) -> Result<f64> {
        (0..self.n_modes).map(|m| self.mean_photon_number(m)).sum()
    }

    pub(crate) fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.n_modes {
            return Err(Error::InvalidMode { mode, n_modes: self.n_modes });
        }
        Ok(())
    }

    /// Largest `|amp|^2` across all terms and modes.
    pub fn max_amp_sqr(&self) -> f64 {
        self.terms
            .iter()
            .flat_map(|t| t.amps.iter())
            .map(|a| a.norm_sqr())
            .fold(0.0, f64::max)
    }

    /// Single-mode cat `(eps_plus |alpha> + eps_minus |-alpha>) / sqrt(N_0)`.
    pub fn cat(alpha: Complex64, eps_plus: Complex64, eps_minus: Complex64) -> Result<Self> {
        // N_0 = |e+ + e-|^2 (1 + c)/2 + |e+ - e-|^2 (1 - c)/2, which equals
        // |e+|^2 + |e-|^2 + 2 c Re(e-^* e+) without the cancellation.
        let cat = cat_overlap(alpha);
        let n0 = (eps_plus + eps_minus).norm_sqr() * (1.0 + cat) / 2.0
            + (eps_plus - eps_minus).norm_sqr() * one_minus_cat_overlap(alpha) / 2.0;
        if !(n0 > NORM_SQ_FLOOR) {
            return Err(Error::NormTooSmall { norm_sq: n0 });
        }
        let k = 1.0 / n0.sqrt();
        let raw = Self::from_parts(
            1,
            vec![
                CoherentTerm::new(eps_plus * k, vec![alpha]),
                CoherentTerm::new(eps_minus * k, vec![-alpha]),
            ],
        );
        Ok(raw.merged())
    }

    /// `|H_alpha> = (|alpha, alpha> - |-alpha, -alpha>) / sqrt(N_alpha)` with
    /// `N_alpha = 2 - 2 exp(-4|alpha|^2)`.
    pub fn entangled_h(alpha: Complex64) -> Result<Self> {
        let n_alpha = -2.0 * (-4.0 * alpha.norm_sqr()).exp_m1();
        if !(n_alpha > NORM_SQ_FLOOR) {
            return Err(Error::NormTooSmall { norm_sq: n_alpha });
        }
        let k = 1.0 / n_alpha.sqrt();
        Ok(Self::from_parts(
            2,
            vec![
                CoherentTerm::new(c(k), vec![alpha, alpha]),
                CoherentTerm::new(c(-k), vec![-alpha, -alpha]),
            ],
        )
        .merged())
    }

    /// `|G_alpha> = (|alpha, alpha> + |-alpha, -alpha>) / sqrt(2 + 2 c_alpha^2)`.
    pub fn entangled_g(alpha: Complex64) -> Self {
        let cat = cat_overlap(alpha);
        let k = 1.0 / (2.0 + 2.0 * cat * cat).sqrt();
        Self::from_parts(
            2,
            vec![
                CoherentTerm::new(c(k), vec![alpha, alpha]),
                CoherentTerm::new(c(k), vec![-alpha, -alpha]),
            ],
        )
        .merged()
    }

    /// Is `other` the same ray, i.e. `|<self|other>| = 1` for unit vectors?
    pub fn same_ray(&self, other: &Self, tol: f64) -> Result<bool> {
        let a = self.normalize()?;
        let b = other.normalize()?;
        Ok((a.inner_product(&b)?.norm() - 1.0).abs() <= tol)
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
    fn single_term_norm() {
        let s = CoherentSuperposition::new(1, vec![CoherentTerm::new(z(2.0, 0.0), vec![z(0.0, 0.0)])]).unwrap();
        assert_abs_diff_eq!(s.norm_sqr(), 4.0, epsilon = 1e-15);
    }

    #[test]
    fn serde_round_trip() {
        let h = CoherentSuperposition::entangled_h(z(0.4, -0.3)).unwrap();
        let text = serde_json::to_string(&h).unwrap();
        let back: CoherentSuperposition = serde_json::from_str(&text).unwrap();
        assert_eq!(back, h);
    }

    #[test]
    fn mode_mismatch_is_an_error() {
        let a = CoherentSuperposition::product(&[z(0.1, 0.0)]);
        let b = CoherentSuperposition::product(&[z(0.1, 0.0), z(0.0, 0.0)]);
        assert!(matches!(a.inner_product(&b), Err(Error::ModeMismatch { .. })));
        assert!(CoherentSuperposition::new(2, vec![CoherentTerm::new(z(1.0, 0.0), vec![z(0.0, 0.0)])]).is_err());
    }

    #[test]
    fn h_is_normalized_with_closed_form() {
        for a in [0.05, 0.3, 1.0, 2.5] {
            let h = CoherentSuperposition::entangled_h(z(a, 0.0)).unwrap();
            assert_abs_diff_eq!(h.norm_sqr(), 1.0, epsilon = 1e-12);
        }
        let h = CoherentSuperposition::entangled_h(z(0.6, -0.8)).unwrap();
        assert_abs_diff_eq!(h.norm_sqr(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn plus_minus_kets_are_orthogonal() {
        let alpha = z(0.7, 0.2);
        let plus = CoherentSuperposition::cat(alpha, z(1.0, 0.0), z(1.0, 0.0)).unwrap();
        let minus = CoherentSuperposition::cat(alpha, z(1.0, 0.0), z(-1.0, 0.0)).unwrap();
        let ip = plus.inner_product(&minus).unwrap();
        assert!(ip.norm() < 1e-14);
        // By hand: <a|a> - <a|-a> + <-a|a> - <-a|-a> = 0 since c_alpha is real.
        let cat = cat_overlap(alpha);
        let by_hand = 1.0 - cat + cat - 1.0;
        assert_abs_diff_eq!(by_hand, 0.0);
    }

    #[test]
    fn normalize_cases() {
        let alpha = z(0.7, 0.0);
        let raw = CoherentSuperposition::new(
            1,
            vec![
                CoherentTerm::new(z(1.0, 0.0), vec![alpha]),
                CoherentTerm::new(z(-1.0, 0.0), vec![-alpha]),
            ],
        )
        .unwrap();
        let n_minus = 2.0 - 2.0 * cat_overlap(alpha);
        assert_abs_diff_eq!(raw.norm_sqr(), n_minus, epsilon = 1e-14);
        let n = raw.normalize().unwrap();
        assert_abs_diff_eq!(n.terms()[0].coeff.re, 1.0 / n_minus.sqrt(), epsilon = 1e-14);
        let again = n.normalize().unwrap();
        assert_abs_diff_eq!(again.terms()[0].coeff.re, n.terms()[0].coeff.re, epsilon = 1e-12);

        let zero = CoherentSuperposition::new(
            1,
            vec![
                CoherentTerm::new(z(1.0, 0.0), vec![alpha]),
                CoherentTerm::new(z(-1.0, 0.0), vec![alpha]),
            ],
        )
        .unwrap();
        assert!(matches!(zero.normalize(), Err(Error::NormTooSmall { .. })));
    }

    #[test]
    fn cat_constructor() {
        let alpha = z(0.9, 0.1);
        let coh = CoherentSuperposition::cat(alpha, z(1.0, 0.0), z(0.0, 0.0)).unwrap();
        assert_eq!(coh.terms().len(), 1);
        assert_abs_diff_eq!(coh.inner_product(&CoherentSuperposition::product(&[alpha])).unwrap().re, 1.0, epsilon = 1e-14);

        // N_0 = 2 + 2 e^{-2} at alpha = eps = 1.
        let one = CoherentSuperposition::cat(z(1.0, 0.0), z(1.0, 0.0), z(1.0, 0.0)).unwrap();
        let n0 = 2.0 + 2.0 * (-2.0f64).exp();
        assert_abs_diff_eq!(one.terms()[0].coeff.re, 1.0 / n0.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(one.norm_sqr(), 1.0, epsilon = 1e-14);

        let a = z(0.5, 0.0);
        let cat = CoherentSuperposition::cat(a, z(1.0, 0.0), z(-1.0, 0.0)).unwrap();
        let manual = CoherentSuperposition::new(
            1,
            vec![CoherentTerm::new(z(1.0, 0.0), vec![a]), CoherentTerm::new(z(-1.0, 0.0), vec![-a])],
        )
        .unwrap()
        .normalize()
        .unwrap();
        assert_abs_diff_eq!(cat.inner_product(&manual).unwrap().re, 1.0, epsilon = 1e-13);

        assert!(matches!(
            CoherentSuperposition::cat(z(0.0, 0.0), z(1.0, 0.0), z(-1.0, 0.0)),
            Err(Error::NormTooSmall { .. })
        ));
    }

    #[test]
    fn h_mean_photon_number() {
        let a = 1.0;
        let h = CoherentSuperposition::entangled_h(z(a, 0.0)).unwrap();
        let cc = (-2.0f64).exp();
        let expected = 2.0 * a * a * (1.0 + cc * cc) / (1.0 - cc * cc);
        assert_abs_diff_eq!(h.total_mean_photon_number().unwrap(), expected, epsilon = 1e-12);

        let h2 = CoherentSuperposition::entangled_h(z(2.0, 0.0)).unwrap();
        assert!((h2.total_mean_photon_number().unwrap() - 8.0).abs() < 0.01);
        assert!(matches!(
            CoherentSuperposition::entangled_h(z(0.0, 0.0)),
            Err(Error::NormTooSmall { .. })
        ));
    }

    #[test]
    fn g_at_zero_is_vacuum() {
        let g = CoherentSuperposition::entangled_g(z(0.0, 0.0));
        assert_eq!(g.terms().len(), 1);
        assert_abs_diff_eq!(g.norm_sqr(), 1.0, epsilon = 1e-15);
        let g1 = CoherentSuperposition::entangled_g(z(1.0, 0.0));
        assert_abs_diff_eq!(g1.norm_sqr(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn tensor_product_inner() {
        let a = CoherentSuperposition::cat(z(0.4, 0.0), z(1.0, 0.0), z(0.5, 0.5)).unwrap();
        let b = CoherentSuperposition::entangled_h(z(0.8, 0.0)).unwrap();
        let ab = a.tensor(&b);
        assert_eq!(ab.n_modes(), 3);
        assert_abs_diff_eq!(ab.norm_sqr(), 1.0, epsilon = 1e-13);
    }
}
