// Copyright 2026 The ecslab Authors
// SPDX-License-Identifier: Apache-2.0

//! Randomized agreement checks between the coherent-state engine, its closed
//! forms and the truncated Fock oracle.
//!
//! Every check reports the worst delta it saw and the input that produced
//! it. Oracle checks run at a truncation chosen from the Poisson tail unless
//! a cutoff override is given; under an override, an oracle check whose
//! conversion lost more than [`TRUNCATION_WARN`] of the norm is reported as
//! a warning instead of a failure.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coherent::{overlap, CoherentSuperposition, CoherentTerm, Conventions, FamilyState};
use crate::decoherence::{fidelity_closed_form, fidelity_numeric, propagate};
use crate::entanglement::{entanglement_of, reduced_spectrum};
use crate::error::Result;
use crate::fock::{default_cutoff, poisson_tail, FockVector, TRUNCATION_WARN};
use crate::quadrature::SphereRule;
use crate::teleport::{
    fidelity_noisy, p_even_closed_form, p_odd_noisy, sphere_averages, CatInput, Preparation, Protocol, QubitPoint,
    Resource,
};

/// Seed used when `ECSLAB_SEED` is unset.
pub const DEFAULT_SEED: u64 = 20_260_101;
/// Cutoff of the generic oracle comparisons.
pub const ORACLE_CUTOFF: usize = 40;

/// `ECSLAB_SEED` if set and parseable, else [`DEFAULT_SEED`].
pub fn seed_from_env() -> u64 {
    std::env::var("ECSLAB_SEED").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_SEED)
}

#[derive(Debug, Clone, Copy)]
pub struct ValidationConfig {
    pub seed: u64,
    /// Replaces every oracle truncation.
    pub cutoff: Option<usize>,
    /// Conventions handed to the protocol engine; the oracle never uses them.
    pub conventions: Conventions,
    /// Random draws per check.
    pub samples: usize,
}

impl Default for ValidationConfig {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, cutoff: None, conventions: Conventions::default(), samples: 8 }
    }
}

impl ValidationConfig {
    pub fn from_env() -> Self {
        Self { seed: seed_from_env(), ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckStatus {
    Pass,
    Warn,
    Fail,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "PASS",
            CheckStatus::Warn => "WARN",
            CheckStatus::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: &'static str,
    pub worst: f64,
    pub tolerance: f64,
    pub status: CheckStatus,
    /// Input that produced `worst`, or the error that aborted the check.
    pub worst_input: String,
    pub note: Option<String>,
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub seed: u64,
    pub checks: Vec<CheckReport>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("seed {}\n", self.seed);
        for c in &self.checks {
            out.push_str(&format!(
                "{:<4} {:<32} worst {:.3e}  tol {:.1e}  at {}\n",
                c.status.to_string(),
                c.name,
                c.worst,
                c.tolerance,
                c.worst_input
            ));
            if let Some(note) = &c.note {
                out.push_str(&format!("     {note}\n"));
            }
        }
        let fails = self.checks.iter().filter(|c| c.status == CheckStatus::Fail).count();
        let warns = self.checks.iter().filter(|c| c.status == CheckStatus::Warn).count();
        out.push_str(&format!("{} checks, {} failed, {} warnings\n", self.checks.len(), fails, warns));
        out
    }
}

struct Acc {
    name: &'static str,
    tolerance: f64,
    oracle: bool,
    worst: f64,
    worst_input: String,
    violated: bool,
    truncation: f64,
}

impl Acc {
    fn new(name: &'static str, tolerance: f64, oracle: bool) -> Self {
        Self { name, tolerance, oracle, worst: 0.0, worst_input: "-".into(), violated: false, truncation: 0.0 }
    }

    fn record(&mut self, delta: f64, allowed: f64, input: impl FnOnce() -> String) {
        let worse = delta.is_nan() || delta > self.worst || self.worst_input == "-";
        if worse && !self.worst.is_nan() {
            self.worst = delta;
            self.worst_input = input();
        }
        if !(delta <= allowed) {
            self.violated = true;
        }
    }

    fn check(&mut self, delta: f64, input: impl FnOnce() -> String) {
        self.record(delta, self.tolerance, input)
    }

    fn truncated(&mut self, loss: f64) {
        self.truncation = self.truncation.max(loss);
    }

    fn finish(self, result: Result<()>, overridden: bool) -> CheckReport {
        let under_resolved = self.oracle && self.truncation > TRUNCATION_WARN;
        // Under an override the oracle itself is the suspect once the delta
        // is within reach of the truncation error.
        let explained = self.oracle && overridden && self.violated && self.worst <= 10.0 * self.truncation;
        let note = (under_resolved || explained)
            .then(|| format!("truncation loss {:.3e} at the requested cutoff", self.truncation));
        let (status, worst_input) = match result {
            Err(e) => (CheckStatus::Fail, format!("error: {e}")),
            Ok(()) => {
                let status = if (under_resolved && overridden) || explained {
                    CheckStatus::Warn
                } else if self.violated {
                    CheckStatus::Fail
                } else if under_resolved {
                    CheckStatus::Warn
                } else {
                    CheckStatus::Pass
                };
                (status, self.worst_input)
            }
        };
        CheckReport { name: self.name, worst: self.worst, tolerance: self.tolerance, status, worst_input, note }
    }
}

fn disk(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let r = radius * rng.random::<f64>().sqrt();
    Complex64::from_polar(r, rng.random_range(0.0..2.0 * PI))
}

fn random_coeff(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Up to four terms on `n_modes` modes with `|amp| <= max_amp`, normalized.
pub fn random_state(rng: &mut ChaCha8Rng, n_modes: usize, max_amp: f64) -> CoherentSuperposition {
    loop {
        let n_terms = rng.random_range(1..=4);
        let terms = (0..n_terms)
            .map(|_| CoherentTerm::new(random_coeff(rng), (0..n_modes).map(|_| disk(rng, max_amp)).collect()))
            .collect();
        if let Ok(s) = CoherentSuperposition::new(n_modes, terms).and_then(|s| s.normalize()) {
            if s.norm_sqr() > 0.5 {
                return s;
            }
        }
    }
}

/// A family member with `|alpha| = alpha0` and random local shifts.
pub fn random_family(rng: &mut ChaCha8Rng, alpha0: f64, max_shift: f64) -> FamilyState {
    let alpha = Complex64::from_polar(alpha0, rng.random_range(0.0..2.0 * PI));
    FamilyState::h(alpha).shifted(disk(rng, max_shift), disk(rng, max_shift))
}

pub fn random_qubit(rng: &mut ChaCha8Rng) -> QubitPoint {
    let theta = rng.random_range(-1.0f64..1.0).acos();
    QubitPoint { theta, phi: rng.random_range(0.0..2.0 * PI) }
}

/// Smallest cutoff whose Poisson tail at `amp_sq` is below `tol`.
pub fn tail_cutoff(amp_sq: f64, tol: f64) -> usize {
    (1..).find(|&c| poisson_tail(amp_sq, c) < tol).unwrap_or(1)
}

/// `(n, 0)` outcomes of the protocol with the `|H_alpha>` resource,
/// simulated entirely in the truncated number basis.
#[derive(Debug, Clone)]
pub struct FockProtocolOracle {
    /// `P(n, 0)` for `n = 0..=n_max`.
    pub probabilities: Vec<f64>,
    /// Bob's fidelity with the ideal input per `n`; NaN where the
    /// probability vanishes.
    pub fidelities: Vec<f64>,
    pub truncation_loss: f64,
}

pub fn fock_protocol(input: &CatInput, eta: f64, n_max: usize, cutoff: Option<usize>) -> Result<FockProtocolOracle> {
    let a2 = input.alpha.norm_sqr();
    let pick = |lambda: f64| cutoff.unwrap_or_else(|| tail_cutoff(lambda, 1e-13));
    let c_mix = pick(2.0 * a2);
    let c_bob = pick(a2);
    let c_env = pick((1.0 - eta) * a2);
    let target = input.state(eta)?;
    let joint = target.tensor(&CoherentSuperposition::entangled_h(input.alpha)?);
    let v = FockVector::from_coherent(&joint, vec![c_mix, c_mix, c_bob])?;
    let truncation_loss = v.truncation_loss();
    let v = v.loss(1, eta, c_env)?.loss(2, eta, c_env)?.beam_splitter(0, 1)?;
    let target_fock = FockVector::from_coherent(&target, vec![c_bob])?;
    let mut probabilities = Vec::with_capacity(n_max + 1);
    let mut fidelities = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let (rest, _) = v.project(0, n)?;
        let (bob, p) = rest.project(0, 0)?;
        let rho = bob.partial_trace(&[0])?;
        probabilities.push(p);
        fidelities.push(if p > 1e-280 { rho.sandwich(&target_fock)? / p } else { f64::NAN });
    }
    Ok(FockProtocolOracle { probabilities, fidelities, truncation_loss })
}

type CheckFn = fn(&mut ChaCha8Rng, &ValidationConfig, &mut Acc) -> Result<()>;

const CHECKS: &[(&str, f64, bool, CheckFn)] = &[
    ("overlap_vs_fock_series", 1e-8, true, check_overlap),
    ("inner_product_vs_fock", 1e-8, true, check_inner),
    ("projection_vs_fock", 1e-8, true, check_projection),
    ("reduced_spectrum_vs_fock", 1e-8, true, check_spectrum),
    ("parity_superselection", 1e-12, true, check_parity),
    ("family_one_ebit", 1e-9, false, check_family_ebit),
    ("decoherence_closed_vs_numeric", 1e-9, false, check_decoherence),
    ("decoherence_vs_fock", 1e-8, true, check_decoherence_fock),
    ("p_odd_noiseless", 1e-9, false, check_p_odd_noiseless),
    ("odd_fidelity_noiseless", 1e-10, false, check_perfect),
    ("p_odd_noisy_vs_enumeration", 1e-8, false, check_p_odd_noisy),
    ("fidelity_noisy_vs_enumeration", 1e-8, false, check_fidelity_noisy),
    ("p_even_vs_enumeration", 1e-8, false, check_p_even),
    ("protocol_vs_fock", 1e-6, true, check_protocol_fock),
    ("sphere_average_p_odd", 1e-6, false, check_sphere_p_odd),
];

/// Names of all checks in run order.
pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.0).collect()
}

pub fn run_all(cfg: &ValidationConfig) -> ValidationReport {
    let checks = CHECKS
        .iter()
        .enumerate()
        .map(|(i, &(name, tol, oracle, f))| {
            // One stream per check so that adding draws to one leaves the rest unchanged.
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(i as u64));
            let mut acc = Acc::new(name, tol, oracle);
            let result = f(&mut rng, cfg, &mut acc);
            acc.finish(result, cfg.cutoff.is_some())
        })
        .collect();
    ValidationReport { seed: cfg.seed, checks }
}

fn protocol(cfg: &ValidationConfig, rng: &mut ChaCha8Rng, resource: Resource, eta: f64) -> Protocol {
    // The resource is prepared from a displaced family member, so that a
    // wrong displacement phase shows up in the protocol checks.
    let prep = Preparation::FromFamily { shift_alice: disk(rng, 0.5), shift_bob: disk(rng, 0.5) };
    Protocol::new(resource, eta).with_conventions(cfg.conventions).with_preparation(prep)
}

fn check_overlap(rng: &mut ChaCha8Rng, cfg: &ValidationConfig, acc: &mut Acc) -> Result<()> {
    let cutoff = cfg.cutoff.unwrap_or(ORACLE_CUTOFF);
    for _ in 0..4 * cfg.samples {
        let (a, b) = (disk(rng, 2.0), disk(rng, 2.0));
        let va = FockVector::from_coherent_uniform(&CoherentSuperposition::product(&[a]), cutoff)?;
        let vb = FockVector::from_coherent_uniform(&CoherentSuperposition::product(&[b]), cutoff)?;
        acc.truncated(va.truncation_loss().max(vb.truncation_loss()));
        let d = (va.inner(&vb)? - overlap(a, b)).norm();
        acc.check(d, || format!("a={a:.4} b={b:.4}"));
    }
    Ok(())
}

fn check_inner(rng: &mut ChaCha8Rng, cfg: &ValidationConfig, acc: &mut Acc) -> Result<()> {
    let cutoff = cfg.cutoff.unwrap_or(ORACLE_CUTOFF);
    for i in 0..cfg.samples {
        let n_modes = 1 + i % 3;
        let s1 = random_state(rng, n_modes, 2.0);
        let s2 = random_state(rng, n_modes, 2.0);
        let v1 = FockVector::from_coherent_uniform(&s1, cutoff)?;
        let v2 = FockVector::from_coherent_uniform(&s2, cutoff)?;
        acc.truncated(v1.truncation_loss().max(v2.truncation_loss()));
        let d = (v1.inner(&v2)? - s1.inner_product(&s2)?).norm();
        acc.check(d, || format!("{n_modes} modes, draw {i}"));
    }
    Ok(())
}

fn check_projection(rng: &mut ChaCha8Rng, cfg: &ValidationConfig, acc: &mut Acc) -> Result<()> {
    let cutoff = cfg.cutoff.unwrap_or(ORACLE_CUTOFF);
    for i in 0..cfg.samples {
        let n_modes = 1 + i % 3;
        let s = random_state(rng, n_modes, 2.0);
        let v = FockVector::from_coherent_uniform(&s, cutoff)?;
        acc.truncated(v.truncation_loss());
        let mode = rng.random_range(0..n_modes);
        for n in 0..8 {
            let (_, p) = s.project_fock(mode, n)?;
            let (_, q) = v.project(mode, n)?;
            acc.check((p - q).abs(), || format!("{n_modes} modes, draw {i}, mode {mode}, n={n}"));
        }
    }
    Ok(())
}

fn check_spectrum(rng: &mut ChaCha8Rng, cfg: &ValidationConfig, acc: &mut Acc) -> Result<()> {
    let cutoff = cfg.cutoff.unwrap_or(ORACLE_CUTOFF);
    for i in 0..cfg.samples {
        let s = random_state(rng, 2, 2.0);
        let v = FockVector::from_coherent_uniform(&s, cutoff)?;
        let loss = v.truncation_loss();
        acc.truncated(loss);
        let exact = reduced_spectrum(&s, &[0])?;
        let fock = v.partial_trace(&[0])?.eigenvalues();
        let d = fock
            .iter()
            .enumerate()
            .map(|(k, f)| (f - exact.eigenvalues().get(k).copied().unwrap_or(0.0)).abs())
            .fold(0.0, f64::max);
        acc.record(d, acc.tolerance.max(10.0 * loss), || format!("2 modes, draw {i}"));
    }
    Ok(())
}

fn check_parity(_rng: &mut ChaCha8Rng, cfg: &ValidationConfig, acc: &mut Acc) -> Result<()> {
    let cutoff = cfg.cutoff.unwrap_or(ORACLE_CUTOFF);
    let a = Complex64::new(0.8, 0.0);
    let h = FockVector::from_coherent_uniform(&CoherentSuperposition::entangled_h(a)?, cutoff)?;
    let g = FockVector::from_coherent_uniform(&CoherentSuperposition::entangled_g(a), cutoff)?;
    acc.truncated(h.truncation_loss().max(g.truncation_loss()));
    acc.check(h.parity_masses().0, || "H at alpha=0.8, even mass".into());
    acc.check(g.parity_masses().1, || "G at alpha=0.8, odd mass".into());
    Ok(())
}

fn check_family_ebit(rng: &mut ChaCha8Rng, cfg: &ValidationConfig, acc: &mut Acc) -> Result<()> {
    for i in 0..2 * cfg.samples {
        let alpha0 = rng.random_range(0.1..2.5);
        let fam = random_family(rng, alpha0, 1.5);
        let e = entanglement_of(&fam.state()?, &[0])?;
        acc.check((e - 1.0).abs(), || format!("alpha0={alpha0:.4}, draw {i}"));
    }
    Ok(())
}

fn check_decoherence(rng: &mut ChaCha8Rng, cfg: &ValidationConfig, acc: &mut Acc) -> Result<()> {
    for _ in 0..2 * cfg.samples {
        let alpha0 = rng.random_range(0.05..3.0);
        let eta = rng.random_range(0.0..1.0);
        let fam = random_family(rng, alpha0, 1.0);
        let numeric = fidelity_numeric(&propagate(&fam, eta)?)?;
        let closed = fidelity_closed_form(alpha0, eta)?;
        acc.check((numeric - closed).abs(), || format!("alpha0={alpha0:.4} eta={eta:.4}"));
    }
    Ok(())
}

fn check_decoherence_fock(rng: &mut ChaCha8Rng, cfg: &ValidationConfig, acc: &mut Acc) -> Result<()> {
    for _ in 0..cfg.samples.div_ceil(3) {
        let alpha = rng.random_range(0.3..1.2);
        let eta = rng.random_range(0.1..1.0);
        let fam = FamilyState::h(Complex64::new(alpha, 0.0));
        let exact = propagate(&fam, eta)?;
        let c = cfg.cutoff.unwrap_or_else(|| default_cutoff(alpha * alpha));
        let ce = cfg.cutoff.unwrap_or_else(|| tail_cutoff((1.0 - eta) * alpha * alpha, 1e-13));
        let v = FockVector::from_coherent_uniform(&fam.state()?, c)?;
        acc.truncated(v.truncation_loss());
        let rho = v.loss(0, eta, ce)?.loss(1, eta, ce)?.partial_trace(&[0, 1])?;
        let target = fam.scaled(eta.sqrt()).state()?;
        let f_fock = rho.sandwich(&FockVector::from_coherent_uniform(&target, c)?)? / rho.trace();
        let f_exact = fidelity_numeric(&exact)?;
        acc.check((f_fock - f_exact).abs(), || format!("alpha={alpha:.4} eta={eta:.4}, fidelity"));
        let ev_fock = rho.eigenvalues();
        let ev_exact = exact.rho.eigenvalues();
        for (k, e) in ev_exact.iter().enumerate() {
            acc.check((ev_fock[k] / rho.trace() - e).abs(), || format!("alpha={alpha:.4} eta={eta:.4}, eigenvalue {k}"));
        }
    }
    Ok(())
}

fn check_p_odd_noiseless(rng: &mut ChaCha8Rng, cfg: &ValidationConfig, acc: &mut Acc) -> Result<()> {
    for _ in 0..cfg.samples {
        let alpha = Complex64::new(rng.random_range(0.3..2.0), 0.0);
        let q = random_qubit(rng);
        let run = protocol(cfg, rng, Resource::H, 1.0).run(&CatInput::from_qubit(q, alpha, 1.0)?)?;
        let d = (run.success_probability() - 0.5).abs();
        acc.record(d, acc.tolerance + run.tail_bound, || format!("alpha={:.4} theta={:.4} phi={:.4}", alpha.re, q.theta, q.phi));
    }
    Ok(())
}

fn check_perfect(rng: &mut ChaCha8Rng, cfg: &ValidationConfig, acc: &mut Acc) -> Result<()> {
    for _ in 0..cfg.samples {
        let alpha = Complex64::new(rng.random_range(0.3..2.0), 0.0);
        let q = random_qubit(rng);
        let run = protocol(cfg, rng, Resource::H, 1.0).run(&CatInput::from_qubit(q, alpha, 1.0)?)?;
        for o in run.outcomes.iter().filter(|o| o.success && o.probability > 1e-200) {
            acc.check((1.0 - o.fidelity).abs(), || {
                format!("alpha={:.4} theta={:.4} phi={:.4} (n,m)=({},{})", alpha.re, q.theta, q.phi, o.n, o.m)
            });
        }
    }
    Ok(())
}

fn noisy_sample(rng: &mut ChaCha8Rng) -> (f64, f64, QubitPoint) {
    (rng.random_range(0.2..2.0), rng.random_range(0.05..1.0), random_qubit(rng))
}

fn check_p_odd_noisy(rng: &mut ChaCha8Rng, cfg: &ValidationConfig, acc: &mut Acc) -> Result<()> {
    for _ in 0..cfg.samples {
        let (a, eta, q) = noisy_sample(rng);
        let input = CatInput::from_qubit(q, Complex64::new(a, 0.0), eta)?;
        let run = protocol(cfg, rng, Resource::H, eta).run(&input)?;
        let d = (run.success_probability() - p_odd_noisy(&input, eta)?).abs();
        acc.record(d, acc.tolerance + run.tail_bound, || format!("alpha={a:.4} eta={eta:.4} theta={:.4} phi={:.4}", q.theta, q.phi));
    }
    Ok(())
}

fn check_fidelity_noisy(rng: &mut ChaCha8Rng, cfg: &ValidationConfig, acc: &mut Acc) -> Result<()> {
    for _ in 0..cfg.samples {
        let (a, eta, q) = noisy_sample(rng);
        let input = CatInput::from_qubit(q, Complex64::new(a, 0.0), eta)?;
        let run = protocol(cfg, rng, Resource::H, eta).run(&input)?;
        let f = fidelity_noisy(&input, eta)?;
        for o in run.outcomes.iter().filter(|o| o.success && o.probability > 1e-200) {
            acc.check((o.fidelity - f).abs(), || {
                format!("alpha={a:.4} eta={eta:.4} theta={:.4} phi={:.4} (n,m)=({},{})", q.theta, q.phi, o.n, o.m)
            });
        }
    }
    Ok(())
}

fn check_p_even(rng: &mut ChaCha8Rng, cfg: &ValidationConfig, acc: &mut Acc) -> Result<()> {
    for _ in 0..cfg.samples {
        let alpha = Complex64::new(rng.random_range(0.3..2.0), 0.0);
        let q = random_qubit(rng);
        let run = protocol(cfg, rng, Resource::G, 1.0).run(&CatInput::from_qubit(q, alpha, 1.0)?)?;
        let d = (run.success_probability() - p_even_closed_form(alpha)).abs();
        acc.record(d, acc.tolerance + run.tail_bound, || format!("alpha={:.4} theta={:.4} phi={:.4}", alpha.re, q.theta, q.phi));
    }
    Ok(())
}

fn check_protocol_fock(rng: &mut ChaCha8Rng, cfg: &ValidationConfig, acc: &mut Acc) -> Result<()> {
    let mut draws = vec![(1.0, 0.7, QubitPoint { theta: PI / 2.0, phi: 0.0 })];
    for _ in 1..cfg.samples.div_ceil(4) {
        draws.push((rng.random_range(0.4..1.2), rng.random_range(0.3..1.0), random_qubit(rng)));
    }
    for (a, eta, q) in draws {
        let input = CatInput::from_qubit(q, Complex64::new(a, 0.0), eta)?;
        let oracle = fock_protocol(&input, eta, 5, cfg.cutoff)?;
        acc.truncated(oracle.truncation_loss);
        let run = protocol(cfg, rng, Resource::H, eta).with_n_cap(5).run(&input)?;
        let f = fidelity_noisy(&input, eta)?;
        let label = |what: String| format!("alpha={a:.4} eta={eta:.4} theta={:.4} phi={:.4} {what}", q.theta, q.phi);
        for o in run.outcomes.iter().filter(|o| o.m == 0) {
            let p = oracle.probabilities[o.n];
            acc.check((o.probability - p).abs(), || label(format!("P({},0)", o.n)));
            if o.success && p > 1e-12 {
                acc.check((oracle.fidelities[o.n] - o.fidelity).abs(), || label(format!("fidelity n={}", o.n)));
                acc.check((oracle.fidelities[o.n] - f).abs(), || label(format!("closed-form fidelity n={}", o.n)));
            }
        }
    }
    Ok(())
}

fn check_sphere_p_odd(rng: &mut ChaCha8Rng, cfg: &ValidationConfig, acc: &mut Acc) -> Result<()> {
    let rule = SphereRule::default();
    for _ in 0..cfg.samples.div_ceil(2) {
        let a = rng.random_range(0.1..4.0);
        let eta = rng.random_range(0.05..1.0);
        let (_, p) = sphere_averages(a, eta, false, &rule)?;
        acc.check((p - 0.5).abs(), || format!("alpha={a:.4} eta={eta:.4}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherent::{BeamSplitterConvention, DisplacementPhase};

    #[test]
    fn clean_run_passes() {
        let report = run_all(&ValidationConfig { samples: 4, ..ValidationConfig::default() });
        assert!(report.passed(), "{}", report.to_text());
        assert!(report.checks.iter().all(|c| c.status == CheckStatus::Pass), "{}", report.to_text());
        assert_eq!(report.checks.len(), check_names().len());
    }

    #[test]
    fn deterministic_for_a_seed() {
        let cfg = ValidationConfig { samples: 2, seed: 7, ..ValidationConfig::default() };
        assert_eq!(run_all(&cfg).to_text(), run_all(&cfg).to_text());
    }

    #[test]
    fn mutations_fail() {
        for conventions in [
            Conventions { beam_splitter: BeamSplitterConvention::SignFlipped, ..Conventions::default() },
            Conventions { beam_splitter: BeamSplitterConvention::Symmetric, ..Conventions::default() },
            Conventions { displacement_phase: DisplacementPhase::Dropped, ..Conventions::default() },
        ] {
            let report = run_all(&ValidationConfig { samples: 3, conventions, ..ValidationConfig::default() });
            assert!(!report.passed(), "{conventions:?}");
        }
    }

    #[test]
    fn small_cutoff_downgrades_to_warnings() {
        let report = run_all(&ValidationConfig { samples: 2, cutoff: Some(5), ..ValidationConfig::default() });
        assert!(report.passed(), "{}", report.to_text());
        assert!(report.check("inner_product_vs_fock").unwrap().status == CheckStatus::Warn);
        assert!(report.checks.iter().any(|c| c.note.is_some()));
    }

    #[test]
    fn fock_protocol_noiseless() {
        let input = CatInput::new(Complex64::new(0.6, 0.1), Complex64::new(0.3, -0.5), Complex64::new(0.8, 0.0));
        let o = fock_protocol(&input, 1.0, 4, None).unwrap();
        let n_alpha = 2.0 - 2.0 * (-4.0f64 * 0.64).exp();
        for n in [1, 3] {
            let expect = crate::coherent::number_amplitude(Complex64::new(2f64.sqrt() * 0.8, 0.0), n).norm_sqr() / n_alpha;
            assert!((o.probabilities[n] - expect).abs() < 1e-12);
            assert!((o.fidelities[n] - 1.0).abs() < 1e-10);
        }
    }
}
