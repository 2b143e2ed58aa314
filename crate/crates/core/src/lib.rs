// Copyright 2026 The ecslab Authors
// SPDX-License-Identifier: Apache-2.0

//! Entangled coherent states: exact algebra over finite superpositions of
//! multi-mode coherent kets, photon loss, photon-counting teleportation of
//! cat-state qubits, and a truncated Fock-space oracle that checks all of
//! it by brute force.
//!
//! The crate is organised bottom-up:
//!
//! - [`coherent`]: superpositions, overlaps, coherent-preserving unitaries,
//!   the loss channel, photon-number projection and partial traces.
//! - [`fock`]: the independent number-basis oracle.
//! - [`entanglement`]: entropies, spectra and fidelities.
//! - [`decoherence`]: symmetric loss on the entangled pair.
//! - [`teleport`]: the beam-splitter/photon-counting protocol and its
//!   closed forms, plus Bloch-sphere averaging.
//! - [`sweep`]: tabulated parameter sweeps with deterministic CSV output.
//! - [`validation`]: randomized oracle-agreement checks.
//!
//! Grid evaluations run on rayon when the `parallel` feature is enabled
//! (the default); see [`exec::Execution`].

// Guards are written `!(x > floor)` so that NaN fails them too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coherent;
pub mod decoherence;
pub mod entanglement;
pub mod error;
pub mod exec;
pub mod fock;
pub mod quadrature;
pub mod sweep;
pub mod teleport;
pub mod validation;

pub use num_complex::Complex64;

pub use coherent::{
    BeamSplitterConvention, CoherentSuperposition, CoherentTerm, Conventions, DisplacementPhase,
    FamilyState, GramMatrix, NonorthogonalDensity,
};
pub use error::{Error, Result};
pub use exec::Execution;
pub use fock::{FockDensity, FockVector};
pub use sweep::SweepTable;
