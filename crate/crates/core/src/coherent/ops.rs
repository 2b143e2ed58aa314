// Copyright 2026 The ecslab Authors
// SPDX-License-Identifier: Apache-2.0

//! Maps that send coherent kets to coherent kets.

use num_complex::Complex64;

use super::state::{CoherentSuperposition, CoherentTerm};
use super::number_amplitude;
use crate::error::{Error, Result};

/// Amplitude map of the 50/50 beam splitter.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum BeamSplitterConvention {
    /// `(a, b) -> ((a + b)/sqrt 2, (a - b)/sqrt 2)`; the `i` phases of the
    /// physical device absorbed into the second input and output ports.
    #[default]
    Real,
    /// `(a, b) -> ((a - b)/sqrt 2, (a + b)/sqrt 2)`.
    SignFlipped,
    /// `(a, b) -> ((a + i b)/sqrt 2, (i a + b)/sqrt 2)`.
    Symmetric,
}

impl BeamSplitterConvention {
    pub fn apply(self, a: Complex64, b: Complex64) -> (Complex64, Complex64) {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let i = Complex64::i();
        match self {
            Self::Real => ((a + b) * h, (a - b) * h),
            Self::SignFlipped => ((a - b) * h, (a + b) * h),
            Self::Symmetric => ((a + i * b) * h, (i * a + b) * h),
        }
    }
}

/// Whether `D(beta)|a> = exp(i Im(beta a^*)) |a + beta>` keeps its phase.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum DisplacementPhase {
    #[default]
    Included,
    /// Drops the phase. Not unitary on superpositions; mutation testing only.
    Dropped,
}

/// Sign and phase conventions used by the protocol engine.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Conventions {
    pub beam_splitter: BeamSplitterConvention,
    pub displacement_phase: DisplacementPhase,
}

impl CoherentSuperposition {
    fn map_terms(&self, n_modes: usize, mut f: impl FnMut(&CoherentTerm) -> CoherentTerm) -> Self {
        let terms = self.terms().iter().map(&mut f).collect();
        Self::from_parts(n_modes, terms).merged()
    }

    /// Displacement `D(beta)` on one mode.
    pub fn displace(&self, mode: usize, beta: Complex64) -> Result<Self> {
        self.displace_with(mode, beta, DisplacementPhase::Included)
    }

    pub fn displace_with(&self, mode: usize, beta: Complex64, phase: DisplacementPhase) -> Result<Self> {
        self.check_mode(mode)?;
        Ok(self.map_terms(self.n_modes(), |t| {
            let a = t.amps[mode];
            let mut amps = t.amps.clone();
            amps[mode] = a + beta;
            let coeff = match phase {
                DisplacementPhase::Included => t.coeff * Complex64::from_polar(1.0, (beta * a.conj()).im),
                DisplacementPhase::Dropped => t.coeff,
            };
            CoherentTerm::new(coeff, amps)
        }))
    }

    /// Phase shifter `a -> e^{i theta} a` on one mode.
    pub fn phase_rotate(&self, mode: usize, theta: f64) -> Result<Self> {
        self.check_mode(mode)?;
        let rot = Complex64::from_polar(1.0, theta);
        Ok(self.map_terms(self.n_modes(), |t| {
            let mut amps = t.amps.clone();
            amps[mode] *= rot;
            CoherentTerm::new(t.coeff, amps)
        }))
    }

    pub fn beam_splitter(&self, mode_i: usize, mode_j: usize) -> Result<Self> {
        self.beam_splitter_with(mode_i, mode_j, BeamSplitterConvention::Real)
    }

    pub fn beam_splitter_with(&self, mode_i: usize, mode_j: usize, convention: BeamSplitterConvention) -> Result<Self> {
        self.check_mode(mode_i)?;
        self.check_mode(mode_j)?;
        if mode_i == mode_j {
            return Err(Error::SameMode(mode_i));
        }
        Ok(self.map_terms(self.n_modes(), |t| {
            let (x, y) = convention.apply(t.amps[mode_i], t.amps[mode_j]);
            let mut amps = t.amps.clone();
            amps[mode_i] = x;
            amps[mode_j] = y;
            CoherentTerm::new(t.coeff, amps)
        }))
    }

    /// Loss channel dilated onto a fresh vacuum environment mode, which is
    /// appended after the existing modes: `|a>|0>_E -> |sqrt(eta) a>|sqrt(1-eta) a>_E`.
    pub fn loss_channel(&self, mode: usize, eta: f64) -> Result<Self> {
        self.check_mode(mode)?;
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::EtaOutOfRange(eta));
        }
        let keep = eta.sqrt();
        let leak = (1.0 - eta).sqrt();
        Ok(self.map_terms(self.n_modes() + 1, |t| {
            let a = t.amps[mode];
            let mut amps = t.amps.clone();
            amps[mode] = a * keep;
            amps.push(a * leak);
            CoherentTerm::new(t.coeff, amps)
        }))
    }

    /// Projects `mode` onto `|n>` and removes it. Returns the unnormalized
    /// remainder and its squared norm, which is the outcome probability when
    /// `self` is normalized.
    pub fn project_fock(&self, mode: usize, n: usize) -> Result<(Self, f64)> {
        self.check_mode(mode)?;
        let rest = self.map_terms(self.n_modes() - 1, |t| {
            let mut amps = t.amps.clone();
            let a = amps.remove(mode);
            CoherentTerm::new(t.coeff * number_amplitude(a, n), amps)
        });
        let norm_sq = rest.norm_sqr().max(0.0);
        Ok((rest, norm_sq))
    }
}
