// Copyright 2026 The ecslab Authors
// SPDX-License-Identifier: Apache-2.0

//! Entropies, spectra and state fidelities, all in bits (ebits).

use num_complex::Complex64;

use crate::coherent::{cat_overlap, CoherentSuperposition, NonorthogonalDensity};
use crate::error::{Error, Result};

/// Eigenvalues within this of `[0, 1]` are clipped; beyond it they are rejected.
pub const SPECTRUM_TOL: f64 = 1e-10;

/// Density-matrix eigenvalues, sorted descending.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum(Vec<f64>);

impl Spectrum {
    pub fn new(mut eigenvalues: Vec<f64>) -> Result<Self> {
        for &v in &eigenvalues {
            if !(-SPECTRUM_TOL..=1.0 + SPECTRUM_TOL).contains(&v) {
                return Err(Error::InvalidSpectrum { value: v });
            }
        }
        for v in &mut eigenvalues {
            *v = v.clamp(0.0, 1.0);
        }
        eigenvalues.sort_by(|a, b| b.total_cmp(a));
        Ok(Self(eigenvalues))
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }
}

/// `-sum l log2 l`, with `0 log 0 = 0`.
pub fn entropy(spectrum: &Spectrum) -> f64 {
    spectrum
        .eigenvalues()
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.log2())
        .sum()
}

/// Spectrum of the reduced state on `side`, normalized to unit trace.
pub fn reduced_spectrum(state: &CoherentSuperposition, side: &[usize]) -> Result<Spectrum> {
    let state = state.normalize()?;
    let rho = state.reduced_density(side)?;
    let tr = rho.trace();
    Spectrum::new(rho.eigenvalues().into_iter().map(|l| l / tr).collect())
}

/// Entanglement entropy across the cut `side | rest`.
pub fn entanglement_of(state: &CoherentSuperposition, side: &[usize]) -> Result<f64> {
    if side.len() >= state.n_modes() {
        return Err(Error::InvalidParameter("both sides of the cut must be nonempty".into()));
    }
    Ok(entropy(&reduced_spectrum(state, side)?))
}

/// `lambda_pm = (1 +- c_alpha)^2 / (2 + 2 c_alpha^2)` for the reduced `|G_alpha>`.
pub fn g_state_eigenvalues(alpha: Complex64) -> Spectrum {
    let c = cat_overlap(alpha);
    let d = 2.0 + 2.0 * c * c;
    let one_minus = -(-2.0 * alpha.norm_sqr()).exp_m1();
    Spectrum(vec![(1.0 + c).powi(2) / d, one_minus.powi(2) / d])
}

/// Entanglement of the two-mode squeezed vacuum with squeezing `r`:
/// `cosh^2 r log2 cosh^2 r - sinh^2 r log2 sinh^2 r`.
pub fn squeezed_entanglement(r: f64) -> f64 {
    let ch = r.cosh().powi(2);
    let sh = r.sinh().powi(2);
    let xlog = |x: f64| if x > 0.0 { x * x.log2() } else { 0.0 };
    xlog(ch) - xlog(sh)
}

/// `<s|rho|s> / (Tr rho <s|s>)`.
pub fn state_fidelity(rho: &NonorthogonalDensity, s: &CoherentSuperposition) -> Result<f64> {
    let norm = s.norm_sqr();
    let tr = rho.trace();
    if !(norm > crate::coherent::NORM_SQ_FLOOR) {
        return Err(Error::NormTooSmall { norm_sq: norm });
    }
    if !(tr > crate::coherent::NORM_SQ_FLOOR) {
        return Err(Error::NormTooSmall { norm_sq: tr });
    }
    Ok(rho.sandwich(s)? / (norm * tr))
}
