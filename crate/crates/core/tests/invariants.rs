// Copyright 2026 The ecslab Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use ecslab::coherent::{overlap, CoherentTerm, GramMatrix};
use ecslab::decoherence::{fidelity_numeric, propagate};
use ecslab::entanglement::{entanglement_of, entropy, Spectrum};
use ecslab::fock::poisson_tail;
use ecslab::teleport::{CatInput, Protocol, QubitPoint, Resource};
use ecslab::{Complex64, CoherentSuperposition, FamilyState, FockVector};
use proptest::prelude::*;

fn amp(max: f64) -> impl Strategy<Value = Complex64> {
    (0.0..max, 0.0..2.0 * PI).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn coeff() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| Complex64::new(a, b))
}

fn state(n_modes: usize, max_amp: f64) -> impl Strategy<Value = CoherentSuperposition> {
    prop::collection::vec((coeff(), prop::collection::vec(amp(max_amp), n_modes)), 1..=4).prop_filter_map(
        "degenerate",
        move |terms| {
            let terms = terms.into_iter().map(|(c, a)| CoherentTerm::new(c, a)).collect();
            CoherentSuperposition::new(n_modes, terms).ok()?.normalize().ok()
        },
    )
}

fn state_pair() -> impl Strategy<Value = (CoherentSuperposition, CoherentSuperposition)> {
    (1usize..=3).prop_flat_map(|n| (state(n, 2.0), state(n, 2.0)))
}

fn qubit() -> impl Strategy<Value = QubitPoint> {
    (0.0..=PI, 0.0..2.0 * PI).prop_map(|(theta, phi)| QubitPoint::new(theta, phi).unwrap())
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn unitaries_preserve_inner_products((s1, s2) in state_pair(), beta in amp(1.5), theta in 0.0..2.0 * PI) {
        let before = s1.inner_product(&s2).unwrap();
        let d = |s: &CoherentSuperposition| s.displace(0, beta).unwrap();
        prop_assert!(close(d(&s1).inner_product(&d(&s2)).unwrap(), before, 1e-12));
        let r = |s: &CoherentSuperposition| s.phase_rotate(s.n_modes() - 1, theta).unwrap();
        prop_assert!(close(r(&s1).inner_product(&r(&s2)).unwrap(), before, 1e-12));
        if s1.n_modes() > 1 {
            let b = |s: &CoherentSuperposition| s.beam_splitter(0, 1).unwrap();
            prop_assert!(close(b(&s1).inner_product(&b(&s2)).unwrap(), before, 1e-12));
        }
    }

    #[test]
    fn beam_splitter_is_an_involution(s in state(2, 2.0)) {
        let back = s.beam_splitter(0, 1).unwrap().beam_splitter(0, 1).unwrap();
        prop_assert!(close(back.inner_product(&s).unwrap(), Complex64::new(1.0, 0.0), 1e-12));
    }

    #[test]
    fn loss_is_an_isometry(s in state(2, 2.0), eta in 0.0..=1.0f64, mode in 0usize..2) {
        let out = s.loss_channel(mode, eta).unwrap();
        prop_assert_eq!(out.n_modes(), 3);
        prop_assert!((out.norm_sqr() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn norm_is_real_and_normalize_is_unit(s in state(2, 2.0), k in coeff()) {
        let scaled = s.scaled(k * 3.0 + Complex64::new(0.1, 0.0));
        prop_assert!(scaled.inner_product(&scaled).unwrap().im.abs() <= 1e-12 * scaled.norm_sqr().max(1.0));
        if let Ok(n) = scaled.normalize() {
            prop_assert!((n.norm_sqr() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn gram_is_positive(s in state(3, 2.0)) {
        let kets: Vec<Vec<Complex64>> = s.terms().iter().map(|t| t.amps.clone()).collect();
        prop_assert!(GramMatrix::of(&kets).min_eigenvalue() >= -1e-10);
    }

    #[test]
    fn measurement_completeness(s in state(2, 2.0), mode in 0usize..2) {
        let cap = 40;
        let total: f64 = (0..=cap).map(|n| s.project_fock(mode, n).unwrap().1).sum();
        let tail: f64 = s.terms().iter().map(|t| t.coeff.norm() * poisson_tail(t.amps[mode].norm_sqr(), cap).sqrt()).sum();
        prop_assert!((1.0 - total).abs() <= tail * tail + 1e-12);
    }

    #[test]
    fn overlap_is_conjugate_symmetric(a in amp(3.0), b in amp(3.0)) {
        prop_assert!(close(overlap(a, b), overlap(b, a).conj(), 1e-15));
    }

    #[test]
    fn entropy_ignores_order_and_padding(mut v in prop::collection::vec(0.0..1.0f64, 1..6), pad in 0usize..4) {
        let sum: f64 = v.iter().sum();
        prop_assume!(sum > 1e-3);
        v.iter_mut().for_each(|x| *x /= sum);
        let e = entropy(&Spectrum::new(v.clone()).unwrap());
        v.reverse();
        v.extend(std::iter::repeat_n(0.0, pad));
        prop_assert!((entropy(&Spectrum::new(v.clone()).unwrap()) - e).abs() <= 1e-12);
        prop_assert!(e >= 0.0 && e <= (v.len() as f64).log2() + 1e-12);
    }

    #[test]
    fn entanglement_is_locally_invariant(s in state(2, 1.5), beta in amp(1.0), theta in 0.0..2.0 * PI) {
        let e = entanglement_of(&s, &[0]).unwrap();
        let moved = s.displace(0, beta).unwrap().phase_rotate(1, theta).unwrap();
        prop_assert!((entanglement_of(&moved, &[0]).unwrap() - e).abs() <= 1e-9);
    }

    #[test]
    fn family_states_carry_one_ebit(a0 in 0.1..2.5f64, phase in 0.0..2.0 * PI, s0 in amp(2.0), s1 in amp(2.0)) {
        let fam = FamilyState::h(Complex64::from_polar(a0, phase)).shifted(s0, s1);
        prop_assert!((entanglement_of(&fam.state().unwrap(), &[0]).unwrap() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn family_decoheres_alike(a0 in 0.05..3.0f64, eta in 0.0..=1.0f64, phase in 0.0..2.0 * PI, s0 in amp(1.5), s1 in amp(1.5)) {
        let reference = fidelity_numeric(&propagate(&FamilyState::h(Complex64::new(a0, 0.0)), eta).unwrap()).unwrap();
        let fam = FamilyState::h(Complex64::from_polar(a0, phase)).shifted(s0, s1);
        let pair = propagate(&fam, eta).unwrap();
        prop_assert!(pair.s_factor.norm() <= 1.0 + 1e-12);
        prop_assert!((pair.rho.trace() - 1.0).abs() <= 1e-10);
        prop_assert!((fidelity_numeric(&pair).unwrap() - reference).abs() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fock_oracle_agrees((s1, s2) in state_pair(), n in 0usize..6) {
        let v1 = FockVector::from_coherent_uniform(&s1, 40).unwrap();
        let v2 = FockVector::from_coherent_uniform(&s2, 40).unwrap();
        prop_assert!(close(v1.inner(&v2).unwrap(), s1.inner_product(&s2).unwrap(), 1e-8));
        let mode = s1.n_modes() - 1;
        prop_assert!((v1.project(mode, n).unwrap().1 - s1.project_fock(mode, n).unwrap().1).abs() <= 1e-8);
    }

    #[test]
    fn fock_spectra_agree(s in state(2, 2.0)) {
        let v = FockVector::from_coherent_uniform(&s, 40).unwrap();
        let exact = s.reduced_density(&[0]).unwrap().eigenvalues();
        let fock = v.partial_trace(&[0]).unwrap().eigenvalues();
        let tol = 1e-8f64.max(10.0 * v.truncation_loss());
        for (k, f) in fock.iter().enumerate() {
            prop_assert!((f - exact.get(k).copied().unwrap_or(0.0)).abs() <= tol);
        }
    }

    #[test]
    fn truncation_loss_shrinks_with_cutoff(s in state(1, 3.0), c in 1usize..30) {
        let lo = FockVector::from_coherent_uniform(&s, c).unwrap().truncation_loss();
        let hi = FockVector::from_coherent_uniform(&s, c + 1).unwrap().truncation_loss();
        prop_assert!(hi <= lo + 1e-15);
        prop_assert!(lo >= -1e-12);
    }

    #[test]
    fn protocol_outcomes(a in 0.2..2.0f64, eta in 0.05..=1.0f64, q in qubit(), g in any::<bool>()) {
        let resource = if g { Resource::G } else { Resource::H };
        let input = CatInput::from_qubit(q, Complex64::new(a, 0.0), eta).unwrap();
        let run = Protocol::new(resource, eta).run(&input).unwrap();
        prop_assert!((run.total_probability() + run.tail_bound - 1.0).abs() <= 1e-9);
        for o in &run.outcomes {
            prop_assert!(o.probability >= 0.0);
            prop_assert!((0.0..=1.0).contains(&o.fidelity));
            let count = o.n + o.m;
            let expect = match resource { Resource::H => count % 2 == 1, Resource::G => count > 0 && count % 2 == 0 };
            prop_assert_eq!(o.success, expect);
        }
        for (n, m) in [(1, 1), (2, 1), (1, 3), (2, 2)] {
            prop_assert!(run.probability(n, m).unwrap() <= 1e-300);
        }
    }

    #[test]
    fn noiseless_counts_ignore_the_input(a in 0.2..2.0f64, q1 in qubit(), q2 in qubit()) {
        let alpha = Complex64::new(a, 0.0);
        let r1 = Protocol::new(Resource::H, 1.0).with_n_cap(12).run(&CatInput::from_qubit(q1, alpha, 1.0).unwrap()).unwrap();
        let r2 = Protocol::new(Resource::H, 1.0).with_n_cap(12).run(&CatInput::from_qubit(q2, alpha, 1.0).unwrap()).unwrap();
        for (o1, o2) in r1.outcomes.iter().zip(&r2.outcomes) {
            if o1.m == 0 && o1.n % 2 == 1 {
                prop_assert!((o1.probability - o2.probability).abs() <= 1e-12);
            }
        }
    }
}
