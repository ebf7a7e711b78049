mod common;

use common::*;
use dmy_core::normalform::{annihilates, decompose, reconstruct, split_linear, FailureReason, NormalFormData};
use dmy_core::ratpoly::{int, rat, Mat2, Poly1, Rat};
use dmy_core::spectra::{global_disk_decision, univariate_reduce};
use dmy_core::symmetry::{is_equivariant, GroupMatrix};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn decompose_inverts_reconstruct() {
    let mut r = rng(11);
    for _ in 0..500 {
        let nf = random_normal_form(&mut r);
        let map = reconstruct(&nf);
        let back = decompose(&map).unwrap_or_else(|e| panic!("{map}: {}", e.detail));
        assert_eq!(back, nf, "{map}");
        assert_eq!(reconstruct(&back), map);
    }
}

#[test]
fn non_proportional_parts_are_rejected() {
    let mut r = rng(12);
    for _ in 0..500 {
        let map = random_non_proportional(&mut r);
        let err = decompose(&map).expect_err("non-proportional map decomposed");
        assert_eq!(err.reason, FailureReason::NonProportional, "{map}");
    }
}

#[test]
fn canonical_form_conventions() {
    let mut r = rng(13);
    for _ in 0..300 {
        let nf = random_normal_form(&mut r);
        let lead = if nf.a != int(0) { &nf.a } else { &nf.b };
        assert_eq!(lead, &int(1));
        if nf.is_linear() {
            assert_eq!(
                (&nf.a, &nf.b, &nf.alpha, &nf.beta),
                (&int(1), &int(0), &int(0), &int(0))
            );
        } else {
            assert_eq!(nf.r.leading_coeff(), int(1));
            assert_eq!(nf.r, nf.p.shift_up(2));
        }
    }
}

/// Independent check of a successful decomposition: the nonlinear parts are
/// proportional to `(α, β)` and constant along lines `a·x + b·y = c`.
#[test]
fn successful_decomposition_is_certified() {
    let mut r = rng(14);
    for _ in 0..300 {
        let map = random_hypotheses_map(&mut r);
        let nf = decompose(&map).unwrap_or_else(|e| panic!("{map}: {}", e.detail));
        let (linear, n1, n2) = split_linear(&map).unwrap();
        assert_eq!(linear, nf.linear);
        assert_eq!(n1.scale(&nf.beta), n2.scale(&nf.alpha));
        assert!(annihilates(&nf.a, &nf.b, &n1) && annihilates(&nf.a, &nf.b, &n2));
        assert_eq!(reconstruct(&nf), map);
    }
}

/// κ-equivariant normal forms: `B` diagonal and one of
/// `r(y)·(1, 0)` with `r` even, `r(x)·(1, 0)`, or `r(y)·(0, 1)` with `r` odd.
fn kappa_family(r: &mut impl Rng, family: u32) -> NormalFormData {
    let d1 = rat(r.gen_range(-7..=7), 8);
    let d2 = rat(r.gen_range(-7..=7), 8);
    let parity = |k: u32| match family {
        0 => k.is_multiple_of(2),
        2 => k % 2 == 1,
        _ => true,
    };
    let terms: Vec<(u32, Rat)> = (0..=4u32)
        .filter(|&k| parity(k))
        .map(|k| (k, rat(r.gen_range(-3..=3), 16)))
        .collect();
    let mut p = Poly1::from_terms(terms);
    if p.is_zero() {
        p = Poly1::monomial(if family == 2 { 1 } else { 0 }, rat(1, 8));
    }
    let (a, b, alpha, beta) = match family {
        0 => (int(0), int(1), int(1), int(0)),
        1 => (int(1), int(0), int(1), int(0)),
        _ => (int(0), int(1), int(0), int(1)),
    };
    NormalFormData::normalized(Mat2::diag(d1, d2), a, b, alpha, beta, p).unwrap()
}

#[test]
fn reflection_symmetric_forms_under_the_hypotheses() {
    let kappa = GroupMatrix::reflection(0.0);
    let mut r = rng(15);
    let mut holding = 0;
    for i in 0..600 {
        let family = i % 3;
        let nf = kappa_family(&mut r, family);
        let map = reconstruct(&nf);
        assert!(is_equivariant(&map, &kappa, 1e-9).unwrap(), "{map}");
        let nf = decompose(&map).unwrap();
        if !global_disk_decision(&univariate_reduce(&nf)) {
            continue;
        }
        holding += 1;
        // the only survivor: u = y, (α, β) ∝ (1, 0), r even
        assert_eq!(family, 0, "{map}");
        assert!(nf.linear.is_diagonal());
        assert_eq!((&nf.a, &nf.b), (&int(0), &int(1)), "{map}");
        assert_eq!(nf.beta, int(0), "{map}");
        assert!(nf.r.terms().all(|(k, _)| k % 2 == 0), "{map}");
    }
    assert!(holding >= 100, "only {holding} maps satisfied the hypotheses");
}

proptest! {
    #![proptest_config(cases(200))]

    #[test]
    fn failure_reason_is_conjugation_invariant(map in map_strategy(4), p in invertible_strategy()) {
        let conj = map.conjugate(&p).unwrap();
        let before = decompose(&map).map(|_| ()).map_err(|e| e.reason);
        let after = decompose(&conj).map(|_| ()).map_err(|e| e.reason);
        prop_assert_eq!(before, after);
    }

    #[test]
    fn conjugated_normal_forms_decompose(seed in any::<u64>(), p in invertible_strategy()) {
        let nf = random_normal_form(&mut rng(seed));
        let conj = reconstruct(&nf).conjugate(&p).unwrap();
        let back = decompose(&conj).unwrap();
        prop_assert_eq!(&back.linear, &p.inverse().unwrap().mul(&nf.linear).mul(&p));
        prop_assert_eq!(back.is_linear(), nf.is_linear());
        prop_assert_eq!(back.r.degree(), nf.r.degree());
    }
}
