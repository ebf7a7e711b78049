//! Sturm sequences over the rationals: strict positivity on the real line
//! and isolation of real roots.

use num_traits::{One, Signed, Zero};

use crate::ratpoly::{Poly1, Rat};

/// Sturm sequence `p, p', -rem(p, p'), …` with each entry reduced to its
/// positive primitive part (positive scaling keeps every sign count intact).
pub fn sturm_sequence(p: &Poly1) -> Vec<Poly1> {
    let mut seq = vec![p.primitive_positive()];
    if p.degree() <= 0 {
        return seq;
    }
    seq.push(p.derivative().primitive_positive());
    loop {
        let n = seq.len();
        let (_, rem) = seq[n - 2].div_rem(&seq[n - 1]);
        if rem.is_zero() {
            break;
        }
        seq.push((-&rem).primitive_positive());
    }
    seq
}

fn variations<I: Iterator<Item = i8>>(signs: I) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for s in signs.filter(|s| *s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

fn sign(r: &Rat) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

fn sign_at_infinity(p: &Poly1, positive: bool) -> i8 {
    let lc = sign(&p.leading_coeff());
    if positive || p.degree() % 2 == 0 {
        lc
    } else {
        -lc
    }
}

/// Number of distinct real roots of the sequence's polynomial.
fn real_root_count(seq: &[Poly1]) -> usize {
    let at_neg = variations(seq.iter().map(|p| sign_at_infinity(p, false)));
    let at_pos = variations(seq.iter().map(|p| sign_at_infinity(p, true)));
    at_neg - at_pos
}

/// Distinct roots in the open interval `(lo, hi)`; endpoints must not be roots.
pub fn roots_between(seq: &[Poly1], lo: &Rat, hi: &Rat) -> usize {
    let v = |x: &Rat| variations(seq.iter().map(|p| sign(&p.eval(x))));
    v(lo).saturating_sub(v(hi))
}

/// `true` iff `q(u) > 0` for every real `u`.
pub fn sturm_positive(q: &Poly1) -> bool {
    match q.degree() {
        -1 => false,
        0 => q.leading_coeff().is_positive(),
        d if d % 2 == 1 => false,
        _ => q.leading_coeff().is_positive() && real_root_count(&sturm_sequence(q)) == 0,
    }
}

/// Open interval `(lo, hi)` with rational, non-root endpoints holding exactly
/// one distinct real root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootInterval {
    pub lo: Rat,
    pub hi: Rat,
}

/// Isolates the distinct real roots of a nonzero polynomial, ascending.
/// Intervals are pairwise disjoint (they may share a non-root endpoint).
pub fn isolate_real_roots(q: &Poly1) -> Vec<RootInterval> {
    if q.degree() <= 0 {
        return Vec::new();
    }
    let sqf = q.squarefree();
    let seq = sturm_sequence(&sqf);
    let bound = sqf.root_bound();
    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        match roots_between(&seq, &lo, &hi) {
            0 => {}
            1 => out.push(RootInterval { lo, hi }),
            _ => {
                let mid = non_root_split(&sqf, &lo, &hi);
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

/// A point strictly inside `(lo, hi)` that is not a root of `p`.
fn non_root_split(p: &Poly1, lo: &Rat, hi: &Rat) -> Rat {
    let width = hi - lo;
    let mut k = 2i64;
    loop {
        // midpoint first, then lo + width/3, lo + width/5, ...
        let t = if k == 2 {
            Rat::new(1.into(), 2.into())
        } else {
            Rat::new(1.into(), k.into())
        };
        let mid = lo + &width * t;
        if !p.eval(&mid).is_zero() {
            return mid;
        }
        k += 1;
    }
}

/// Halves `iv` (a root interval of the squarefree `sqf`) until narrower than `width`.
pub fn refine(sqf: &Poly1, iv: &RootInterval, width: &Rat) -> RootInterval {
    let seq = sturm_sequence(sqf);
    let mut cur = iv.clone();
    while &(&cur.hi - &cur.lo) >= width {
        let mid = non_root_split(sqf, &cur.lo, &cur.hi);
        if roots_between(&seq, &cur.lo, &mid) == 1 {
            cur.hi = mid;
        } else {
            cur.lo = mid;
        }
    }
    cur
}

/// Exact rational root inside `iv`, if the root there is rational.
///
/// A rational root `p/q` of an integer polynomial has `q | lc`, so it is
/// `k/lc` for an integer `k`. Once the interval is narrower than `1/|lc|`
/// at most one such candidate remains.
pub fn rational_root_in(q: &Poly1, iv: &RootInterval) -> Option<Rat> {
    let sqf = q.squarefree().primitive_positive();
    let lc = sqf.leading_coeff().abs();
    let narrow = refine(&sqf, iv, &(Rat::one() / &lc));
    let lo_k = (&narrow.lo * &lc).floor().to_integer();
    let hi_k = (&narrow.hi * &lc).ceil().to_integer();
    let mut k = lo_k;
    while k <= hi_k {
        let candidate = Rat::new(k.clone(), lc.to_integer());
        if candidate > narrow.lo && candidate < narrow.hi && q.eval(&candidate).is_zero() {
            return Some(candidate);
        }
        k += 1;
    }
    None
}

/// How a polynomial fails to be strictly positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonPositivity {
    /// `q(u) < 0` at this rational `u`.
    Negative(Rat),
    /// `q ≥ 0` everywhere but vanishes at a real root: exactly at `exact`
    /// when the root is rational, otherwise somewhere in `interval`.
    Touches { interval: RootInterval, exact: Option<Rat> },
}

/// `None` when `q > 0` on all of ℝ; otherwise a point or root certifying failure.
pub fn non_positivity(q: &Poly1) -> Option<NonPositivity> {
    if sturm_positive(q) {
        return None;
    }
    if q.is_zero() {
        return Some(NonPositivity::Touches {
            interval: RootInterval {
                lo: -Rat::one(),
                hi: Rat::one(),
            },
            exact: Some(Rat::zero()),
        });
    }
    let roots = isolate_real_roots(q);
    if roots.is_empty() {
        // no real roots and not positive: negative everywhere
        return Some(NonPositivity::Negative(Rat::zero()));
    }
    // Every gap between consecutive roots contains some `hi` (or the first
    // `lo`), and none of those points is a root.
    let samples = std::iter::once(&roots[0].lo).chain(roots.iter().map(|r| &r.hi));
    for u in samples {
        if q.eval(u).is_negative() {
            return Some(NonPositivity::Negative(u.clone()));
        }
    }
    let first = roots[0].clone();
    let exact = rational_root_in(q, &first);
    Some(NonPositivity::Touches { interval: first, exact })
}
