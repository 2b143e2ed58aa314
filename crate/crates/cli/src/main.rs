// Copyright 2026 The ecslab Authors
// SPDX-License-Identifier: Apache-2.0

mod commands;
mod record;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Entangled coherent states: parameter sweeps, protocol runs and oracle checks.
#[derive(Debug, Parser)]
#[command(name = "ecslab", version)]
pub struct Cli {
    /// Evaluate sweep grids on the calling thread only.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fidelity of the decohered pair versus alpha0, one curve per eta.
    Fig1(Fig1Args),
    /// Sphere-averaged teleportation fidelity and success probability under loss.
    Fig2(Fig2Args),
    /// Success probability and entanglement of the even resource.
    Fig3(Fig3Args),
    /// One protocol instance: the outcome table and closed forms.
    Teleport(TeleportArgs),
    /// Entanglement of a resource state or of a state read from JSON.
    Entangle(EntangleArgs),
    /// Oracle-agreement and invariant checks; nonzero exit on failure.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct Fig1Args {
    #[arg(long, value_delimiter = ',', default_values_t = ecslab::decoherence::DEFAULT_ETAS)]
    pub etas: Vec<f64>,
    #[arg(long, default_value_t = 0.01)]
    pub alpha0_min: f64,
    #[arg(long, default_value_t = 3.0)]
    pub alpha0_max: f64,
    /// Number of log-spaced alpha0 points.
    #[arg(long, default_value_t = 150)]
    pub steps: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct Fig2Args {
    #[arg(long, value_delimiter = ',', default_values_t = ecslab::teleport::DEFAULT_FIG2_ETAS)]
    pub etas: Vec<f64>,
    /// Comma-separated |alpha| values; defaults to 80 points on [0.05, 4].
    #[arg(long, value_delimiter = ',')]
    pub alphas: Option<Vec<f64>>,
    /// Weight the fidelity average by the success probability.
    #[arg(long)]
    pub weighted: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct Fig3Args {
    /// Comma-separated |alpha| values; defaults to 150 points on [0.01, 3].
    #[arg(long, value_delimiter = ',')]
    pub alphas: Option<Vec<f64>>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ResourceArg {
    H,
    G,
}

#[derive(Debug, Args)]
pub struct TeleportArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    #[arg(long)]
    pub theta: f64,
    #[arg(long)]
    pub phi: f64,
    #[arg(long, value_enum, ignore_case = true, default_value = "h")]
    pub resource: ResourceArg,
    /// Largest photon count enumerated per detector.
    #[arg(long)]
    pub n_cap: Option<usize>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct EntangleArgs {
    /// Build the H or G resource at this amplitude.
    #[arg(long, conflicts_with = "state_file", required_unless_present = "state_file")]
    pub alpha: Option<f64>,
    #[arg(long, value_enum, ignore_case = true, default_value = "h")]
    pub resource: ResourceArg,
    /// JSON superposition record: {n_modes, terms: [{coeff_re, coeff_im, amps: [[re, im], ...]}]}.
    #[arg(long)]
    pub state_file: Option<PathBuf>,
    /// Modes on one side of the cut.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub cut: Vec<usize>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Injection {
    BsSignFlip,
    BsSymmetric,
    DropDisplacementPhase,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Replace every oracle cutoff; under-resolved oracle checks become warnings.
    #[arg(long)]
    pub cutoff: Option<usize>,
    #[arg(long, env = "ECSLAB_SEED")]
    pub seed: Option<u64>,
    /// Random draws per check.
    #[arg(long, default_value_t = 8)]
    pub samples: usize,
    /// Run the protocol checks with a deliberately wrong convention.
    #[arg(long, value_enum, hide = true)]
    pub inject: Option<Injection>,
    #[arg(long)]
    pub json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
