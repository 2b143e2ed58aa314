// Copyright 2026 The ecslab Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, ensure, Context, Result};
use ecslab::coherent::{BeamSplitterConvention, DisplacementPhase};
use ecslab::decoherence::fig1_sweep;
use ecslab::entanglement::{g_state_eigenvalues, reduced_spectrum, entropy};
use ecslab::quadrature::SphereRule;
use ecslab::sweep::{format_float, logspace};
use ecslab::teleport::{
    default_fig2_alphas, default_fig3_alphas, fidelity_noisy, fig2_table, fig3_table, p_even_closed_form, p_odd_noisy,
    CatInput, Protocol, QubitPoint, Resource,
};
use ecslab::validation::{run_all, CheckStatus, ValidationConfig, DEFAULT_SEED};
use ecslab::{Complex64, CoherentSuperposition, Conventions, Execution, SweepTable};
use serde_json::json;

use crate::record::StateRecord;
use crate::{Cli, Command, EntangleArgs, Fig1Args, Fig2Args, Fig3Args, Injection, ResourceArg, TeleportArgs, ValidateArgs};

pub fn dispatch(cli: Cli) -> Result<ExitCode> {
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Auto };
    match cli.command {
        Command::Fig1(a) => fig1(a, exec),
        Command::Fig2(a) => fig2(a, exec),
        Command::Fig3(a) => fig3(a, exec),
        Command::Teleport(a) => teleport(a),
        Command::Entangle(a) => entangle(a),
        Command::Validate(a) => validate(a),
    }
}

/// Writes `text` to stdout; a closed pipe is not an error.
fn emit(text: &str) -> Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn check_eta(eta: f64) -> Result<()> {
    ensure!((0.0..=1.0).contains(&eta), "eta = {eta} must lie in [0, 1]");
    Ok(())
}

fn check_grid(name: &str, values: &[f64], positive: bool) -> Result<()> {
    ensure!(!values.is_empty(), "--{name} must not be empty");
    for &v in values {
        ensure!(v.is_finite(), "--{name} contains non-finite value {v}");
        ensure!(!positive || v > 0.0, "--{name} values must be positive, got {v}");
    }
    Ok(())
}

fn write(table: &SweepTable, out: &Path) -> Result<ExitCode> {
    table.write_csv(out).with_context(|| format!("cannot write {}", out.display()))?;
    eprintln!("wrote {} rows to {}", table.len(), out.display());
    Ok(ExitCode::SUCCESS)
}

fn fig1(a: Fig1Args, exec: Execution) -> Result<ExitCode> {
    check_grid("etas", &a.etas, false)?;
    a.etas.iter().try_for_each(|&e| check_eta(e))?;
    ensure!(a.steps >= 1, "--steps must be at least 1");
    ensure!(
        a.alpha0_min > 0.0 && a.alpha0_max >= a.alpha0_min && a.alpha0_max.is_finite(),
        "need 0 < alpha0-min <= alpha0-max"
    );
    let grid = logspace(a.alpha0_min, a.alpha0_max, a.steps);
    write(&fig1_sweep(&a.etas, &grid, exec)?, &a.out)
}

fn fig2(a: Fig2Args, exec: Execution) -> Result<ExitCode> {
    check_grid("etas", &a.etas, false)?;
    a.etas.iter().try_for_each(|&e| check_eta(e))?;
    ensure!(a.etas.iter().all(|&e| e > 0.0), "eta = 0 leaves no input cat to teleport");
    let alphas = a.alphas.unwrap_or_else(default_fig2_alphas);
    check_grid("alphas", &alphas, true)?;
    write(&fig2_table(&alphas, &a.etas, a.weighted, &SphereRule::default(), exec)?, &a.out)
}

fn fig3(a: Fig3Args, exec: Execution) -> Result<ExitCode> {
    let alphas = a.alphas.unwrap_or_else(default_fig3_alphas);
    check_grid("alphas", &alphas, false)?;
    write(&fig3_table(&alphas, exec)?, &a.out)
}

fn resource(r: ResourceArg) -> Resource {
    match r {
        ResourceArg::H => Resource::H,
        ResourceArg::G => Resource::G,
    }
}

fn teleport(a: TeleportArgs) -> Result<ExitCode> {
    check_eta(a.eta)?;
    ensure!(a.alpha.is_finite() && a.alpha > 0.0, "alpha = {} must be positive", a.alpha);
    ensure!((0.0..=PI).contains(&a.theta), "theta = {} must lie in [0, pi]", a.theta);
    ensure!((0.0..2.0 * PI).contains(&a.phi), "phi = {} must lie in [0, 2 pi)", a.phi);
    ensure!(a.n_cap != Some(0), "--n-cap must be at least 1");
    let q = QubitPoint::new(a.theta, a.phi)?;
    let alpha = Complex64::new(a.alpha, 0.0);
    let input = CatInput::from_qubit(q, alpha, a.eta).context("input cat is degenerate")?;
    let res = resource(a.resource);
    let mut protocol = Protocol::new(res, a.eta);
    if let Some(c) = a.n_cap {
        protocol = protocol.with_n_cap(c);
    }
    let run = protocol.run(&input)?;
    let (p_closed, f_closed) = match res {
        Resource::H => (Some(p_odd_noisy(&input, a.eta)?), Some(fidelity_noisy(&input, a.eta)?)),
        Resource::G if a.eta == 1.0 => (Some(p_even_closed_form(alpha)), Some(1.0)),
        Resource::G => (None, None),
    };
    let success = run.success_probability();
    let label = match res {
        Resource::H => "P_odd",
        Resource::G => "P_even",
    };

    if a.json {
        let outcomes: Vec<_> = run
            .outcomes
            .iter()
            .map(|o| json!({"n": o.n, "m": o.m, "probability": o.probability, "success": o.success, "fidelity": o.fidelity}))
            .collect();
        let report = json!({
            "schema": 1,
            "command": "teleport",
            "config": {"alpha": a.alpha, "eta": a.eta, "theta": a.theta, "phi": a.phi,
                       "resource": format!("{res:?}"), "n_cap": run.n_cap},
            "input": StateRecord::from(&run.target),
            "outcomes": outcomes,
            "success_probability": success,
            "closed_form": {"success_probability": p_closed, "success_fidelity": f_closed},
            "total_probability": run.total_probability(),
            "tail_bound": run.tail_bound,
            "tail_warning": run.tail_warning(),
        });
        emit(&(serde_json::to_string_pretty(&report)? + "\n"))?;
    } else {
        let mut out = String::new();
        writeln!(
            out,
            "resource {res:?}  alpha {}  eta {}  theta {}  phi {}  n_cap {}",
            format_float(a.alpha),
            format_float(a.eta),
            format_float(a.theta),
            format_float(a.phi),
            run.n_cap
        )?;
        writeln!(out, "{:>4} {:>4} {:>20} {:>8} {:>10}", "n", "m", "probability", "success", "fidelity")?;
        for o in &run.outcomes {
            writeln!(out, "{:>4} {:>4} {:>20} {:>8} {:>10.6}", o.n, o.m, format_float(o.probability), o.success, o.fidelity)?;
        }
        writeln!(out, "{:<24}{}", "total probability", format_float(run.total_probability()))?;
        writeln!(out, "{:<24}{}", format!("{label} (enumerated)"), format_float(success))?;
        match p_closed {
            Some(p) => writeln!(out, "{:<24}{}", format!("{label} (closed form)"), format_float(p))?,
            None => writeln!(out, "{:<24}n/a under loss", format!("{label} (closed form)"))?,
        }
        if let Some(f) = f_closed {
            writeln!(out, "{:<24}{f:.6}", "success fidelity")?;
        }
        writeln!(out, "{:<24}{:.3e}", "certified tail bound", run.tail_bound)?;
        emit(&out)?;
    }
    if run.tail_warning() {
        eprintln!("warning: probability tail {:.3e} above target at n_cap = {}", run.tail_bound, run.n_cap);
    }
    Ok(ExitCode::SUCCESS)
}

fn entangle(a: EntangleArgs) -> Result<ExitCode> {
    let (state, closed) = match (&a.state_file, a.alpha) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            let rec: StateRecord = serde_json::from_str(&text).with_context(|| format!("bad state record in {}", path.display()))?;
            (CoherentSuperposition::try_from(rec)?.normalize()?, None)
        }
        (None, Some(alpha)) => {
            ensure!(alpha.is_finite() && alpha >= 0.0, "alpha = {alpha} must be nonnegative");
            let z = Complex64::new(alpha, 0.0);
            match a.resource {
                ResourceArg::H => (CoherentSuperposition::entangled_h(z)?, Some(vec![0.5, 0.5])),
                ResourceArg::G => {
                    (CoherentSuperposition::entangled_g(z), Some(g_state_eigenvalues(z).eigenvalues().to_vec()))
                }
            }
        }
        (None, None) => bail!("give --alpha or --state-file"),
    };
    ensure!(a.cut.len() < state.n_modes(), "the cut must leave at least one mode on the other side");
    let spectrum = reduced_spectrum(&state, &a.cut)?;
    let e = entropy(&spectrum);
    let nonzero: Vec<f64> = spectrum.eigenvalues().iter().copied().filter(|&x| x > 1e-14).collect();
    if a.json {
        let report = json!({
            "schema": 1,
            "command": "entangle",
            "state": StateRecord::from(&state),
            "cut": a.cut,
            "entanglement": e,
            "spectrum": nonzero,
            "closed_form_spectrum": closed,
        });
        emit(&(serde_json::to_string_pretty(&report)? + "\n"))?;
    } else {
        let fmt = |v: &[f64]| v.iter().map(|&x| format_float(x)).collect::<Vec<_>>().join(" ");
        let mut out = format!("entanglement  {} ebits\nspectrum      {}\n", format_float(e), fmt(&nonzero));
        if let Some(c) = closed {
            writeln!(out, "closed form   {}", fmt(&c))?;
        }
        emit(&out)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn validate(a: ValidateArgs) -> Result<ExitCode> {
    ensure!(a.cutoff != Some(0), "--cutoff must be at least 1");
    ensure!(a.samples >= 1, "--samples must be at least 1");
    let conventions = match a.inject {
        None => Conventions::default(),
        Some(Injection::BsSignFlip) => {
            Conventions { beam_splitter: BeamSplitterConvention::SignFlipped, ..Conventions::default() }
        }
        Some(Injection::BsSymmetric) => {
            Conventions { beam_splitter: BeamSplitterConvention::Symmetric, ..Conventions::default() }
        }
        Some(Injection::DropDisplacementPhase) => {
            Conventions { displacement_phase: DisplacementPhase::Dropped, ..Conventions::default() }
        }
    };
    let cfg = ValidationConfig { seed: a.seed.unwrap_or(DEFAULT_SEED), cutoff: a.cutoff, conventions, samples: a.samples };
    let report = run_all(&cfg);
    if a.json {
        let checks: Vec<_> = report
            .checks
            .iter()
            .map(|c| {
                json!({"name": c.name, "status": c.status.to_string(), "worst": c.worst, "tolerance": c.tolerance,
                       "worst_input": c.worst_input, "note": c.note})
            })
            .collect();
        let out = json!({"schema": 1, "command": "validate", "seed": report.seed, "cutoff": a.cutoff,
                         "passed": report.passed(), "checks": checks});
        emit(&(serde_json::to_string_pretty(&out)? + "\n"))?;
    } else {
        emit(&report.to_text())?;
    }
    for c in report.checks.iter().filter(|c| c.status == CheckStatus::Warn) {
        eprintln!("warning: {} is under-resolved", c.name);
    }
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
