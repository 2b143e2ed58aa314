// Copyright 2026 The ecslab Authors
// SPDX-License-Identifier: Apache-2.0

//! JSON record of a coherent superposition.

use ecslab::{Complex64, CoherentSuperposition, CoherentTerm};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermRecord {
    pub coeff_re: f64,
    pub coeff_im: f64,
    pub amps: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateRecord {
    pub n_modes: usize,
    pub terms: Vec<TermRecord>,
}

impl From<&CoherentSuperposition> for StateRecord {
    fn from(s: &CoherentSuperposition) -> Self {
        let terms = s
            .terms()
            .iter()
            .map(|t| TermRecord {
                coeff_re: t.coeff.re,
                coeff_im: t.coeff.im,
                amps: t.amps.iter().map(|a| [a.re, a.im]).collect(),
            })
            .collect();
        Self { n_modes: s.n_modes(), terms }
    }
}

impl TryFrom<StateRecord> for CoherentSuperposition {
    type Error = ecslab::Error;

    fn try_from(r: StateRecord) -> ecslab::Result<Self> {
        let terms = r
            .terms
            .into_iter()
            .map(|t| {
                CoherentTerm::new(
                    Complex64::new(t.coeff_re, t.coeff_im),
                    t.amps.into_iter().map(|[re, im]| Complex64::new(re, im)).collect(),
                )
            })
            .collect();
        CoherentSuperposition::new(r.n_modes, terms)
    }
}
