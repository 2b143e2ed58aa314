// Copyright 2026 The ecslab Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mode count mismatch: {left} vs {right}")]
    ModeMismatch { left: usize, right: usize },

    #[error("mode index {mode} out of range for a {n_modes}-mode state")]
    InvalidMode { mode: usize, n_modes: usize },

    #[error("beam splitter needs two distinct modes, got {0} twice")]
    SameMode(usize),

    #[error("squared norm {norm_sq:e} is below the floor; the superposition is degenerate")]
    NormTooSmall { norm_sq: f64 },

    #[error("family constraint violated: |alpha - gamma| = {lhs}, |beta - delta| = {rhs}")]
    ConstraintViolated { lhs: f64, rhs: f64 },

    #[error("transmission eta = {0} is outside [0, 1]")]
    EtaOutOfRange(f64),

    #[error("the set of kept modes is empty")]
    EmptyKeep,

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("eigenvalue {value:e} lies outside [0, 1] beyond round-off")]
    InvalidSpectrum { value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
