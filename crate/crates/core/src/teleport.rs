// Copyright 2026 The ecslab Authors
// SPDX-License-Identifier: Apache-2.0

//! Photon-counting teleportation of cat-state qubits.
//!
//! Mode layout of the protocol state: 0 is the input cat, 1 is Alice's half
//! of the resource, 2 is Bob's half. With loss, the environment modes of
//! Alice's and Bob's channels follow as 3 and 4. Alice mixes modes 0 and 1
//! on a 50/50 beam splitter and counts photons in both; at most one of the
//! counts is nonzero. When the click is in mode 1 Bob applies a phase shift
//! of pi, which maps those outcomes onto the mode-0 ones.
//!
//! The input cat has amplitude `sqrt(eta) * alpha`, matching Alice's
//! attenuated half of the resource, so that the beam splitter still sends
//! each branch into a single output port.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::coherent::{
    cat_overlap, one_minus_cat_overlap, CoherentSuperposition, Conventions, FamilyState, NonorthogonalDensity,
    NORM_SQ_FLOOR,
};
use crate::entanglement::{entanglement_of, state_fidelity};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::fock::poisson_tail;
use crate::quadrature::SphereRule;
use crate::sweep::{linspace, SweepTable};

/// Target for the certified probability tail left out by enumeration.
pub const TAIL_TOL: f64 = 1e-10;
/// Upper limit on the photon count enumerated per detector.
pub const MAX_N_CAP: usize = 200;

/// Shared entangled state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resource {
    /// `|H_alpha>`, odd counts succeed.
    H,
    /// `|G_alpha>`, nonzero even counts succeed.
    G,
}

impl Resource {
    pub fn is_success(self, count: usize) -> bool {
        match self {
            Resource::H => !count.is_multiple_of(2),
            Resource::G => count > 0 && count.is_multiple_of(2),
        }
    }

    /// Relative sign between the `|alpha~>` and `|-alpha~>` branches of
    /// Bob's state after `n` photons.
    fn collapse_sign(self, n: usize) -> f64 {
        let parity = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
        match self {
            Resource::H => -parity,
            Resource::G => parity,
        }
    }
}

impl std::str::FromStr for Resource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "H" | "h" => Ok(Resource::H),
            "G" | "g" => Ok(Resource::G),
            other => Err(Error::InvalidParameter(format!("unknown resource {other:?}"))),
        }
    }
}

/// Unnormalized cat coefficients and the resource amplitude `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatInput {
    pub eps_plus: Complex64,
    pub eps_minus: Complex64,
    pub alpha: Complex64,
}

impl CatInput {
    pub fn new(eps_plus: Complex64, eps_minus: Complex64, alpha: Complex64) -> Self {
        Self { eps_plus, eps_minus, alpha }
    }

    /// The qubit `q` encoded at the amplitude the input cat will carry,
    /// `sqrt(eta) * alpha`.
    pub fn from_qubit(q: QubitPoint, alpha: Complex64, eta: f64) -> Result<Self> {
        let (eps_plus, eps_minus) = qubit_to_cat(q, alpha * eta.sqrt())?;
        Ok(Self { eps_plus, eps_minus, alpha })
    }

    /// The normalized input cat at amplitude `sqrt(eta) * alpha`.
    pub fn state(&self, eta: f64) -> Result<CoherentSuperposition> {
        CoherentSuperposition::cat(self.alpha * eta.sqrt(), self.eps_plus, self.eps_minus)
    }
}

/// Bloch-sphere angles of a cat qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitPoint {
    pub theta: f64,
    pub phi: f64,
}

impl QubitPoint {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::InvalidParameter(format!("theta = {theta} outside [0, pi]")));
        }
        if !(0.0..2.0 * PI).contains(&phi) {
            return Err(Error::InvalidParameter(format!("phi = {phi} outside [0, 2 pi)")));
        }
        Ok(Self { theta, phi })
    }
}

fn plus_minus_norms(alpha: Complex64) -> (f64, f64) {
    (2.0 + 2.0 * cat_overlap(alpha), 2.0 * one_minus_cat_overlap(alpha))
}

/// `sin(theta/2)|+> + cos(theta/2) e^{i phi}|->` written as
/// `eps_plus |alpha> + eps_minus |-alpha>`.
pub fn qubit_to_cat(q: QubitPoint, alpha: Complex64) -> Result<(Complex64, Complex64)> {
    let (n_plus, n_minus) = plus_minus_norms(alpha);
    if !(n_minus > NORM_SQ_FLOOR) {
        return Err(Error::NormTooSmall { norm_sq: n_minus });
    }
    let p = Complex64::new((q.theta / 2.0).sin() / n_plus.sqrt(), 0.0);
    let m = Complex64::from_polar((q.theta / 2.0).cos() / n_minus.sqrt(), q.phi);
    Ok((p + m, p - m))
}

/// Mean photon number of the qubit state `q` at amplitude `alpha`.
pub fn mean_photons_qubit(q: QubitPoint, alpha: Complex64) -> Result<f64> {
    let (n_plus, n_minus) = plus_minus_norms(alpha);
    if !(n_minus > NORM_SQ_FLOOR) {
        return Err(Error::NormTooSmall { norm_sq: n_minus });
    }
    let a2 = alpha.norm_sqr();
    let s2 = (q.theta / 2.0).sin().powi(2);
    let c2 = (q.theta / 2.0).cos().powi(2);
    Ok(s2 * a2 * n_minus / n_plus + c2 * a2 * n_plus / n_minus)
}

/// `int f dp` over the Bloch sphere with `dp = sin(theta) dtheta dphi / (4 pi)`.
pub fn sphere_average(rule: &SphereRule, mut f: impl FnMut(QubitPoint) -> f64) -> f64 {
    rule.integrate(|theta, phi| f(QubitPoint { theta, phi }))
}

/// `||eps_plus |u> + sign * eps_minus |v>||^2` for unit kets with real
/// overlap `x`, arranged so neither summand can cancel.
fn branch_norm(eps_plus: Complex64, eps_minus: Complex64, sign: f64, x: f64, one_minus_x: f64) -> f64 {
    (eps_plus + eps_minus * sign).norm_sqr() * (1.0 + x) / 2.0
        + (eps_plus - eps_minus * sign).norm_sqr() * one_minus_x / 2.0
}

/// Closed-form quantities of the odd-count branch under loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoisyCollapse {
    /// Environment amplitude `sqrt(1 - eta) alpha` of each lossy channel.
    pub k_amp: Complex64,
    /// `<-k|k> = exp(-4 (1 - eta) |alpha|^2)`.
    pub c_k: f64,
    pub n_k: f64,
    /// `N~_0`, norm of the ideal input at `sqrt(eta) alpha`.
    pub n_tilde: f64,
    pub a: Complex64,
    pub b: Complex64,
}

fn check_eta(eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::EtaOutOfRange(eta));
    }
    Ok(())
}

pub fn noisy_collapse(input: &CatInput, eta: f64) -> Result<NoisyCollapse> {
    check_eta(eta)?;
    let (ep, em) = (input.eps_plus, input.eps_minus);
    let alpha_t = input.alpha * eta.sqrt();
    let ct = cat_overlap(alpha_t);
    let a2 = input.alpha.norm_sqr();
    let c_k = (-4.0 * (1.0 - eta) * a2).exp();
    // 1 - c~ c_k = 1 - exp(-2 eta a2 - 4 (1 - eta) a2)
    let one_minus_ck = -(-(2.0 * eta + 4.0 * (1.0 - eta)) * a2).exp_m1();
    let n_tilde = branch_norm(ep, em, 1.0, ct, one_minus_cat_overlap(alpha_t));
    let n_k = branch_norm(ep, em, 1.0, ct * c_k, one_minus_ck);
    if !(n_tilde > NORM_SQ_FLOOR) || !(n_k > NORM_SQ_FLOOR) {
        return Err(Error::NormTooSmall { norm_sq: n_tilde.min(n_k) });
    }
    let a = Complex64::new(ep.norm_sqr(), 0.0) + em.conj() * ep * ct;
    let b = Complex64::new(em.norm_sqr(), 0.0) + ep.conj() * em * ct;
    Ok(NoisyCollapse { k_amp: input.alpha * (1.0 - eta).sqrt(), c_k, n_k, n_tilde, a, b })
}

/// Success probability of the noiseless protocol with `|H_alpha>`.
pub fn p_odd_noiseless() -> f64 {
    0.5
}

/// `P_odd = N_k N_{alpha~} / (2 N~_0 N_alpha)`.
pub fn p_odd_noisy(input: &CatInput, eta: f64) -> Result<f64> {
    let nc = noisy_collapse(input, eta)?;
    let n_alpha = -2.0 * (-4.0 * input.alpha.norm_sqr()).exp_m1();
    let n_alpha_t = -2.0 * (-4.0 * eta * input.alpha.norm_sqr()).exp_m1();
    if !(n_alpha > NORM_SQ_FLOOR) {
        return Err(Error::NormTooSmall { norm_sq: n_alpha });
    }
    Ok(0.5 * nc.n_k * n_alpha_t / (nc.n_tilde * n_alpha))
}

/// Fidelity of the odd-count branch with the ideal input at `sqrt(eta) alpha`:
/// `(|A|^2 + |B|^2 + c_k (A B^* + B A^*)) / (N~_0 N_k)`.
pub fn fidelity_noisy(input: &CatInput, eta: f64) -> Result<f64> {
    let nc = noisy_collapse(input, eta)?;
    let cross = 2.0 * nc.c_k * (nc.a * nc.b.conj()).re;
    Ok((nc.a.norm_sqr() + nc.b.norm_sqr() + cross) / (nc.n_tilde * nc.n_k))
}

/// `P_even = (1 - c_alpha)^2 / (2 + 2 c_alpha^2)` for the `|G_alpha>` resource.
pub fn p_even_closed_form(alpha: Complex64) -> f64 {
    let c = cat_overlap(alpha);
    one_minus_cat_overlap(alpha).powi(2) / (2.0 + 2.0 * c * c)
}

/// Bob's (and the environments') state after `n > 0` photons in one detector,
/// built from the closed form. Modes: Bob, then the two environments.
/// Returns the normalized state and its normalization `N` relative to the
/// raw input coefficients.
pub fn collapse_state(resource: Resource, n: usize, input: &CatInput, eta: f64) -> Result<(CoherentSuperposition, f64)> {
    check_eta(eta)?;
    if n == 0 {
        return Err(Error::InvalidParameter("n = 0 is not a collapse outcome".into()));
    }
    let sign = resource.collapse_sign(n);
    let alpha_t = input.alpha * eta.sqrt();
    let k = input.alpha * (1.0 - eta).sqrt();
    let x = cat_overlap(alpha_t) * (-4.0 * k.norm_sqr()).exp();
    let one_minus_x = -(-2.0 * alpha_t.norm_sqr() - 4.0 * k.norm_sqr()).exp_m1();
    let norm = branch_norm(input.eps_plus, input.eps_minus, sign, x, one_minus_x);
    if !(norm > NORM_SQ_FLOOR) {
        return Err(Error::NormTooSmall { norm_sq: norm });
    }
    let scale = 1.0 / norm.sqrt();
    let state = CoherentSuperposition::new(
        3,
        vec![
            crate::coherent::CoherentTerm::new(input.eps_plus * scale, vec![alpha_t, k, k]),
            crate::coherent::CoherentTerm::new(input.eps_minus * (sign * scale), vec![-alpha_t, -k, -k]),
        ],
    )?
    .merged();
    Ok((state, norm))
}

/// How the shared resource is produced.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub enum Preparation {
    /// Built directly from its defining superposition.
    #[default]
    Direct,
    /// Built as the family member displaced by `shift_alice` (mode 1) and
    /// `shift_bob` (mode 2), then displaced back locally by the parties.
    FromFamily { shift_alice: Complex64, shift_bob: Complex64 },
}

/// One photon-count record.
#[derive(Debug, Clone)]
pub struct ProtocolOutcome {
    /// Count in mode 0.
    pub n: usize,
    /// Count in mode 1.
    pub m: usize,
    pub probability: f64,
    /// Bob's mode (mode 0 here) followed by any environment modes;
    /// normalized unless the probability underflows.
    pub bob_state: CoherentSuperposition,
    /// Overlap of Bob's reduced state with the ideal input; 0 for
    /// outcomes whose probability underflows.
    pub fidelity: f64,
    pub success: bool,
}

/// All enumerated outcomes of one protocol run.
#[derive(Debug, Clone)]
pub struct ProtocolRun {
    pub outcomes: Vec<ProtocolOutcome>,
    pub n_cap: usize,
    /// Certified upper bound on the probability of counts above `n_cap`.
    pub tail_bound: f64,
    /// Ideal input at `sqrt(eta) alpha`, the fidelity reference.
    pub target: CoherentSuperposition,
    mixed: CoherentSuperposition,
}

impl ProtocolRun {
    pub fn total_probability(&self) -> f64 {
        self.outcomes.iter().map(|o| o.probability).sum()
    }

    pub fn success_probability(&self) -> f64 {
        self.outcomes.iter().filter(|o| o.success).map(|o| o.probability).sum()
    }

    pub fn tail_warning(&self) -> bool {
        self.tail_bound > TAIL_TOL
    }

    /// Joint probability of `n` clicks in mode 0 and `m` in mode 1.
    pub fn probability(&self, n: usize, m: usize) -> Result<f64> {
        let (rest, _) = self.mixed.project_fock(0, n)?;
        Ok(rest.project_fock(0, m)?.1)
    }

    /// The state after the beam splitter and before counting.
    pub fn pre_measurement(&self) -> &CoherentSuperposition {
        &self.mixed
    }
}

/// Protocol configuration.
#[derive(Debug, Clone, Copy)]
pub struct Protocol {
    pub resource: Resource,
    pub eta: f64,
    /// Explicit count cap; `None` picks the smallest cap whose certified
    /// tail is below [`TAIL_TOL`], up to [`MAX_N_CAP`].
    pub n_cap: Option<usize>,
    pub conventions: Conventions,
    pub preparation: Preparation,
}

impl Protocol {
    pub fn new(resource: Resource, eta: f64) -> Self {
        Self { resource, eta, n_cap: None, conventions: Conventions::default(), preparation: Preparation::Direct }
    }

    pub fn with_n_cap(mut self, n_cap: usize) -> Self {
        self.n_cap = Some(n_cap);
        self
    }

    pub fn with_conventions(mut self, conventions: Conventions) -> Self {
        self.conventions = conventions;
        self
    }

    pub fn with_preparation(mut self, preparation: Preparation) -> Self {
        self.preparation = preparation;
        self
    }

    /// The two-mode resource as handed to Alice and Bob, before loss.
    pub fn resource_state(&self, alpha: Complex64) -> Result<CoherentSuperposition> {
        match self.preparation {
            Preparation::Direct => match self.resource {
                Resource::H => CoherentSuperposition::entangled_h(alpha),
                Resource::G => Ok(CoherentSuperposition::entangled_g(alpha)),
            },
            Preparation::FromFamily { shift_alice, shift_bob } => {
                let member = FamilyState::h(alpha).shifted(shift_alice, shift_bob);
                let shifted = match self.resource {
                    Resource::H => member.state()?,
                    Resource::G => member.even_state()?,
                };
                let phase = self.conventions.displacement_phase;
                shifted.displace_with(0, -shift_alice, phase)?.displace_with(1, -shift_bob, phase)
            }
        }
    }

    pub fn run(&self, input: &CatInput) -> Result<ProtocolRun> {
        check_eta(self.eta)?;
        if self.n_cap == Some(0) {
            return Err(Error::InvalidParameter("n_cap must be at least 1".into()));
        }
        let target = input.state(self.eta)?;
        let mut resource = self.resource_state(input.alpha)?;
        if self.eta < 1.0 {
            resource = resource.loss_channel(0, self.eta)?.loss_channel(1, self.eta)?;
        }
        let mixed = target.tensor(&resource).beam_splitter_with(0, 1, self.conventions.beam_splitter)?;

        let bound = |cap: usize| mode_tail_bound(&mixed, 0, cap) + mode_tail_bound(&mixed, 1, cap);
        let n_cap = match self.n_cap {
            Some(c) => c,
            None => (1..=MAX_N_CAP).find(|&c| bound(c) < TAIL_TOL).unwrap_or(MAX_N_CAP),
        };
        let tail_bound = bound(n_cap);

        let mut outcomes = Vec::with_capacity(2 * n_cap + 1);
        let counts = std::iter::once((0, 0))
            .chain((1..=n_cap).map(|n| (n, 0)))
            .chain((1..=n_cap).map(|m| (0, m)));
        for (n, m) in counts {
            outcomes.push(self.outcome(&mixed, &target, n, m)?);
        }
        Ok(ProtocolRun { outcomes, n_cap, tail_bound, target, mixed })
    }

    fn outcome(
        &self,
        mixed: &CoherentSuperposition,
        target: &CoherentSuperposition,
        n: usize,
        m: usize,
    ) -> Result<ProtocolOutcome> {
        let (rest, _) = mixed.project_fock(0, n)?;
        let (mut bob, probability) = rest.project_fock(0, m)?;
        if m > 0 {
            bob = bob.phase_rotate(0, PI)?;
        }
        let mut fidelity = 0.0;
        if probability > 1e-280 {
            bob = bob.scaled(Complex64::new(1.0 / probability.sqrt(), 0.0));
            let rho = if bob.n_modes() > 1 {
                bob.reduced_density(&[0])?
            } else {
                NonorthogonalDensity::pure(&bob)
            };
            fidelity = state_fidelity(&rho, target)?.clamp(0.0, 1.0);
        }
        Ok(ProtocolOutcome { n, m, probability, bob_state: bob, fidelity, success: self.resource.is_success(n + m) })
    }
}

/// `(sum_i |c_i| sqrt(tail(|a_i|^2)))^2`, a bound on the probability of more
/// than `cap` photons in `mode` by the triangle inequality.
fn mode_tail_bound(state: &CoherentSuperposition, mode: usize, cap: usize) -> f64 {
    let s: f64 = state
        .terms()
        .iter()
        .map(|t| t.coeff.norm() * poisson_tail(t.amps[mode].norm_sqr(), cap).sqrt())
        .sum();
    s * s
}

/// Sphere averages of the odd-branch fidelity and of `P_odd` at one `(alpha, eta)`.
/// With `weighted`, the fidelity is weighted by the success probability.
pub fn sphere_averages(alpha: f64, eta: f64, weighted: bool, rule: &SphereRule) -> Result<(f64, f64)> {
    let alpha = Complex64::new(alpha, 0.0);
    let mut err = None;
    let mut fid = 0.0;
    let mut pf = 0.0;
    let mut p = 0.0;
    for &(theta, phi, w) in rule.points() {
        let q = QubitPoint { theta, phi };
        let eval = CatInput::from_qubit(q, alpha, eta)
            .and_then(|input| Ok((fidelity_noisy(&input, eta)?, p_odd_noisy(&input, eta)?)));
        match eval {
            Ok((f, po)) => {
                fid += w * f;
                pf += w * f * po;
                p += w * po;
            }
            Err(e) => {
                err = Some(e);
                break;
            }
        }
    }
    if let Some(e) = err {
        return Err(e);
    }
    Ok((if weighted { pf / p } else { fid }, p))
}

/// Default `|alpha|` grid for the noisy-fidelity table.
pub fn default_fig2_alphas() -> Vec<f64> {
    linspace(0.05, 4.0, 80)
}

pub const DEFAULT_FIG2_ETAS: [f64; 5] = [1.0, 0.9, 0.7, 0.5, 0.3];

/// Default `|alpha|` grid for the `|G_alpha>` table.
pub fn default_fig3_alphas() -> Vec<f64> {
    linspace(0.01, 3.0, 150)
}

/// Rows `(alpha, eta, avg_fidelity, avg_p_odd)` ordered by `eta` as given, then `alpha`.
pub fn fig2_table(alphas: &[f64], etas: &[f64], weighted: bool, rule: &SphereRule, exec: Execution) -> Result<SweepTable> {
    if alphas.is_empty() || etas.is_empty() {
        return Err(Error::InvalidParameter("empty sweep grid".into()));
    }
    let points: Vec<(f64, f64)> = etas.iter().flat_map(|&e| alphas.iter().map(move |&a| (a, e))).collect();
    let values = exec.map(&points, |&(a, e)| sphere_averages(a, e, weighted, rule));
    let mut table = SweepTable::new(&["alpha", "eta", "avg_fidelity", "avg_p_odd"]);
    for (&(a, e), v) in points.iter().zip(values) {
        let (f, p) = v?;
        table.push(vec![a, e, f, p]);
    }
    Ok(table)
}

/// Rows `(alpha, p_even, entanglement)` for the `|G_alpha>` resource.
pub fn fig3_table(alphas: &[f64], exec: Execution) -> Result<SweepTable> {
    if alphas.is_empty() {
        return Err(Error::InvalidParameter("empty sweep grid".into()));
    }
    let values = exec.map(alphas, |&a| {
        let alpha = Complex64::new(a, 0.0);
        entanglement_of(&CoherentSuperposition::entangled_g(alpha), &[0]).map(|e| (p_even_closed_form(alpha), e))
    });
    let mut table = SweepTable::new(&["alpha", "p_even", "entanglement"]);
    for (&a, v) in alphas.iter().zip(values) {
        let (p, e) = v?;
        table.push(vec![a, p, e]);
    }
    Ok(table)
}
