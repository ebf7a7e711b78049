//! Shared generators for integration tests. Every generator is driven by a
//! seeded ChaCha RNG so a failing case can be replayed from its seed.

#![allow(dead_code)]

use dmy_core::mapio::PolyMap;
use dmy_core::normalform::NormalFormData;
use dmy_core::ratpoly::{int, rat, ComplexCoeffs, GaussRat, Mat2, Monomial, Poly1, Poly2, Rat};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n/d` with `|n| ≤ num`, `1 ≤ d ≤ den`.
pub fn small_rat(r: &mut impl Rng, num: i64, den: i64) -> Rat {
    rat(r.gen_range(-num..=num), r.gen_range(1..=den))
}

pub fn nonzero_rat(r: &mut impl Rng, num: i64, den: i64) -> Rat {
    loop {
        let q = small_rat(r, num, den);
        if q != int(0) {
            return q;
        }
    }
}

/// Random sparse polynomial with `terms` monomials of total degree in `lo..=hi`.
pub fn random_poly(r: &mut impl Rng, lo: u32, hi: u32, terms: usize, num: i64, den: i64) -> Poly2 {
    Poly2::from_terms((0..terms).map(|_| {
        let d = r.gen_range(lo..=hi);
        let i = r.gen_range(0..=d);
        (Monomial::new(i, d - i), small_rat(r, num, den))
    }))
}

pub fn random_map(r: &mut impl Rng, lo: u32, hi: u32) -> PolyMap {
    let t1 = r.gen_range(0..6);
    let t2 = r.gen_range(0..6);
    PolyMap::from_parts(random_poly(r, lo, hi, t1, 10, 6), random_poly(r, lo, hi, t2, 10, 6))
}

pub fn random_matrix(r: &mut impl Rng, num: i64, den: i64) -> Mat2 {
    Mat2::new(
        small_rat(r, num, den),
        small_rat(r, num, den),
        small_rat(r, num, den),
        small_rat(r, num, den),
    )
}

pub fn invertible_matrix(r: &mut impl Rng, num: i64, den: i64) -> Mat2 {
    loop {
        let m = random_matrix(r, num, den);
        if m.det() != int(0) {
            return m;
        }
    }
}

/// Raw normal-form data: `B` entries in `[−2, 2]`, random direction and
/// coefficients, `p` of degree up to 6 (never zero), then canonicalised.
pub fn random_normal_form(r: &mut impl Rng) -> NormalFormData {
    let linear = Mat2::new(
        small_rat(r, 8, 4),
        small_rat(r, 8, 4),
        small_rat(r, 8, 4),
        small_rat(r, 8, 4),
    );
    let (a, b) = loop {
        let (a, b) = (small_rat(r, 5, 3), small_rat(r, 5, 3));
        if a != int(0) || b != int(0) {
            break (a, b);
        }
    };
    let (alpha, beta) = loop {
        let (al, be) = (small_rat(r, 5, 3), small_rat(r, 5, 3));
        if al != int(0) || be != int(0) {
            break (al, be);
        }
    };
    let deg = r.gen_range(0..=6u32);
    let mut p = Poly1::from_terms((0..deg).map(|k| (k, small_rat(r, 4, 3))));
    p = &p + &Poly1::monomial(deg, nonzero_rat(r, 4, 3));
    NormalFormData::normalized(linear, a, b, alpha, beta, p).expect("direction is nonzero")
}

/// `B·v + (N₁, N₂)` whose nonlinear parts are not proportional, checked by
/// the rank of the two coefficient vectors (all 2×2 minors vanish iff
/// `β·N₁ = α·N₂` for some `(α, β) ≠ 0`).
pub fn random_non_proportional(r: &mut impl Rng) -> PolyMap {
    loop {
        let t1 = r.gen_range(1..5);
        let t2 = r.gen_range(1..5);
        let n1 = random_poly(r, 2, 6, t1, 6, 4);
        let n2 = random_poly(r, 2, 6, t2, 6, 4);
        if rank_at_most_one(&n1, &n2) {
            continue;
        }
        let b = random_matrix(r, 8, 4);
        let f1 = &Poly2::linear(b.get(0, 0), b.get(0, 1)) + &n1;
        let f2 = &Poly2::linear(b.get(1, 0), b.get(1, 1)) + &n2;
        return PolyMap::from_parts(f1, f2);
    }
}

/// Oracle: the coefficient vectors of `p` and `q` are linearly dependent.
pub fn rank_at_most_one(p: &Poly2, q: &Poly2) -> bool {
    let keys: Vec<(u32, u32)> = {
        let mut k: Vec<(u32, u32)> = p.terms().chain(q.terms()).map(|(m, _)| (m.x, m.y)).collect();
        k.sort();
        k.dedup();
        k
    };
    for (s, &(i1, j1)) in keys.iter().enumerate() {
        for &(i2, j2) in &keys[s + 1..] {
            let minor = p.coeff(i1, j1) * q.coeff(i2, j2) - p.coeff(i2, j2) * q.coeff(i1, j1);
            if minor != int(0) {
                return false;
            }
        }
    }
    true
}

/// A map satisfying the hypotheses by construction: conjugate of the
/// triangular map `(X, Y) ↦ (k₁X, mX + k₂Y + r(X))` by an integer matrix
/// `L`. The Jacobian of the triangular map has constant eigenvalues
/// `k₁, k₂`, so every conjugate has too. Coefficients stay small so float
/// orbits from `[−10, 10]²` remain far below the escape radius.
pub fn random_hypotheses_map(r: &mut impl Rng) -> PolyMap {
    let l = loop {
        let m = Mat2::new(
            int(r.gen_range(-1..=1)),
            int(r.gen_range(-1..=1)),
            int(r.gen_range(-1..=1)),
            int(r.gen_range(-1..=1)),
        );
        if m.det() != int(0) && !(m.get(0, 0) == &int(0) && m.get(0, 1) == &int(0)) {
            break m;
        }
    };
    let k1 = rat(r.gen_range(-7..=7), 8);
    let k2 = rat(r.gen_range(-7..=7), 8);
    let m = rat(r.gen_range(-4..=4), 4);
    let deg = r.gen_range(2..=4u32);
    let rpoly = Poly1::from_terms((2..=deg).map(|k| (k, rat(r.gen_range(-3..=3), 64))));
    let rpoly = if rpoly.is_zero() {
        Poly1::monomial(2, rat(1, 64))
    } else {
        rpoly
    };
    let linv = l.inverse().expect("invertible");
    let core = Mat2::new(k1, int(0), m, k2);
    let linear = linv.mul(&core).mul(&l);
    let dir = [linv.get(0, 1).clone(), linv.get(1, 1).clone()];
    let lifted = rpoly.lift_linear(l.get(0, 0), l.get(0, 1));
    let f1 = &Poly2::linear(linear.get(0, 0), linear.get(0, 1)) + &lifted.scale(&dir[0]);
    let f2 = &Poly2::linear(linear.get(1, 0), linear.get(1, 1)) + &lifted.scale(&dir[1]);
    PolyMap::from_parts(f1, f2)
}

/// `diag(d₁, d₂)·v + y²p(y²)·(1, 0)ᵀ`: reflection-equivariant and, with
/// `|dᵢ| < 1`, satisfying the hypotheses.
pub fn random_reflection_form(r: &mut impl Rng) -> PolyMap {
    let d1 = rat(r.gen_range(-7..=7), 8);
    let d2 = rat(r.gen_range(-7..=7), 8);
    let deg = r.gen_range(0..=2u32);
    let mut f1 = Poly2::linear(&d1, &int(0));
    for k in 0..=deg {
        let c = if k == 0 {
            rat(r.gen_range(1..=4), 8)
        } else {
            rat(r.gen_range(-2..=2), 64)
        };
        f1 = &f1 + &Poly2::term(0, 2 * k + 2, c);
    }
    PolyMap::from_parts(f1, Poly2::linear(&int(0), &d2))
}

/// Nonlinear map equivariant under rotation by `2π/n`: complex terms
/// `c·zᵖz̄^q` with `p − q − 1 ≡ 0 (mod n)`, never `0` (those terms commute
/// with every rotation).
pub fn random_zn_map(r: &mut impl Rng, n: u32) -> PolyMap {
    loop {
        let mut terms = vec![((1u32, 0u32), GaussRat::new(small_rat(r, 3, 4), small_rat(r, 3, 4)))];
        let extra = r.gen_range(1..=3);
        for _ in 0..extra {
            let (p, q) = loop {
                let d = r.gen_range(2..=7u32);
                let p = r.gen_range(0..=d);
                let q = d - p;
                let m = p as i64 - q as i64 - 1;
                if m != 0 && m.rem_euclid(n as i64) == 0 {
                    break (p, q);
                }
            };
            terms.push(((p, q), GaussRat::new(small_rat(r, 4, 3), small_rat(r, 4, 3))));
        }
        let map = PolyMap::from_complex(&ComplexCoeffs::from_terms(terms));
        if !map.is_linear() {
            return map;
        }
    }
}

/// The rational rotation with `cos = 3/5`, `sin = 4/5`.
pub fn pythagorean_rotation() -> Mat2 {
    Mat2::new(rat(3, 5), rat(-4, 5), rat(4, 5), rat(3, 5))
}

/// Nonlinear map commuting with `−I` and `κ = diag(1, −1)` (so with
/// `Z2 ⊕ Z2`): `F₁` odd in x and even in y, `F₂` even in x and odd in y.
/// With `rotated` the map is conjugated by [`pythagorean_rotation`], which
/// moves the mirror axes off the quarter-turn angles.
pub fn random_d2_map(r: &mut impl Rng, rotated: bool) -> PolyMap {
    loop {
        let mut f1 = Poly2::linear(&rat(r.gen_range(-7..=7), 8), &int(0));
        let mut f2 = Poly2::linear(&int(0), &rat(r.gen_range(-7..=7), 8));
        for _ in 0..r.gen_range(1..=3) {
            // F1 term x^(2i+1) y^(2j), F2 term x^(2i) y^(2j+1), total degree 3 or 5
            let d = 2 * r.gen_range(1..=2u32) + 1;
            let i = 2 * r.gen_range(0..=(d - 1) / 2) + 1;
            f1 = &f1 + &Poly2::term(i, d - i, small_rat(r, 4, 3));
            let j = 2 * r.gen_range(0..=(d - 1) / 2) + 1;
            f2 = &f2 + &Poly2::term(d - j, j, small_rat(r, 4, 3));
        }
        let map = PolyMap::from_parts(f1, f2);
        if map.is_linear() {
            continue;
        }
        if rotated {
            let rot = pythagorean_rotation();
            return map.conjugate(&rot).expect("rotation is invertible");
        }
        return map;
    }
}

/// Univariate polynomial with degree ≤ 10 and small coefficients.
pub fn random_poly1(r: &mut impl Rng, max_deg: u32) -> Poly1 {
    let deg = r.gen_range(0..=max_deg);
    Poly1::from_terms((0..=deg).map(|k| (k, small_rat(r, 10, 4))))
}

/// Proptest settings without on-disk failure persistence.
pub fn cases(n: u32) -> ProptestConfig {
    ProptestConfig {
        cases: n,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

// proptest strategies built from exponents and small rationals

pub fn rat_strategy() -> impl Strategy<Value = Rat> {
    (-10i64..=10, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

pub fn poly2_strategy(max_deg: u32, max_terms: usize) -> impl Strategy<Value = Poly2> {
    prop::collection::vec((0..=max_deg, 0..=max_deg, rat_strategy()), 0..=max_terms).prop_map(move |ts| {
        Poly2::from_terms(
            ts.into_iter()
                .filter(|(i, j, _)| i + j <= max_deg)
                .map(|(i, j, c)| (Monomial::new(i, j), c)),
        )
    })
}

pub fn map_strategy(max_deg: u32) -> impl Strategy<Value = PolyMap> {
    (poly2_strategy(max_deg, 6), poly2_strategy(max_deg, 6)).prop_map(|(f1, f2)| PolyMap::from_parts(f1, f2))
}

pub fn invertible_strategy() -> impl Strategy<Value = Mat2> {
    (rat_strategy(), rat_strategy(), rat_strategy(), rat_strategy())
        .prop_map(|(a, b, c, d)| Mat2::new(a, b, c, d))
        .prop_filter("invertible", |m| m.det() != int(0))
}

pub fn poly1_strategy(max_deg: u32) -> impl Strategy<Value = Poly1> {
    prop::collection::vec(rat_strategy(), 1..=(max_deg as usize + 1)).prop_map(|cs| Poly1::from_dense(&cs))
}
