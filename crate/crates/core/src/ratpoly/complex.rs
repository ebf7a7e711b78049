//! The `(z, z̄)` form of a planar map.
//!
//! A real map `F = (F₁, F₂)` is the complex polynomial `f = F₁ + i·F₂`
//! written in `z = x + iy` and `z̄ = x − iy`. Rotations and reflections act
//! diagonally on the monomials `z^p z̄^q`, which is what symmetry detection
//! relies on.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly2::{Monomial, Poly2};
use super::rat::{format_rat, to_f64, Rat};

/// Gaussian rational `re + i·im`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussRat {
    pub re: Rat,
    pub im: Rat,
}

impl GaussRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussRat { re, im }
    }

    pub fn real(re: Rat) -> Self {
        GaussRat { re, im: Rat::zero() }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::real(Rat::one())
    }

    pub fn i() -> Self {
        GaussRat::new(Rat::zero(), Rat::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, k: &Rat) -> Self {
        GaussRat::new(&self.re * k, &self.im * k)
    }

    /// Integer power; negative exponents require a nonzero value.
    pub fn powi(&self, e: i64) -> Self {
        let base = if e < 0 {
            let n = self.norm_sqr();
            self.conj().scale(&(Rat::one() / n))
        } else {
            self.clone()
        };
        let mut acc = GaussRat::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.re), to_f64(&self.im))
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i)", format_rat(&self.re), format_rat(&self.im))
    }
}

impl Add for &GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &GaussRat) -> GaussRat {
        GaussRat::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat::new(-self.re.clone(), -self.im.clone())
    }
}

/// Polynomial with Gaussian-rational coefficients in two formal variables.
/// Used both for `(x, y)` and for `(z, z̄)`; the exponent pair is `(p, q)`.
#[derive(Clone, PartialEq, Eq, Default)]
struct GaussPoly(BTreeMap<(u32, u32), GaussRat>);

impl GaussPoly {
    fn one() -> Self {
        let mut m = BTreeMap::new();
        m.insert((0, 0), GaussRat::one());
        GaussPoly(m)
    }

    fn add_term(&mut self, key: (u32, u32), c: GaussRat) {
        if c.is_zero() {
            return;
        }
        let entry = self.0.entry(key).or_default();
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.0.remove(&key);
        }
    }

    fn mul(&self, rhs: &GaussPoly) -> GaussPoly {
        let mut out = GaussPoly::default();
        for (&(p1, q1), c1) in &self.0 {
            for (&(p2, q2), c2) in &rhs.0 {
                out.add_term((p1 + p2, q1 + q2), c1 * c2);
            }
        }
        out
    }

    fn powers(&self, n: u32) -> Vec<GaussPoly> {
        let mut out = vec![GaussPoly::one()];
        for k in 1..=n as usize {
            let next = out[k - 1].mul(self);
            out.push(next);
        }
        out
    }

    /// Substitutes the two formal variables by `first` and `second`.
    fn substitute(
        terms: impl Iterator<Item = ((u32, u32), GaussRat)>,
        first: &GaussPoly,
        second: &GaussPoly,
    ) -> GaussPoly {
        let terms: Vec<_> = terms.collect();
        let max_p = terms.iter().map(|((p, _), _)| *p).max().unwrap_or(0);
        let max_q = terms.iter().map(|((_, q), _)| *q).max().unwrap_or(0);
        let fp = first.powers(max_p);
        let sp = second.powers(max_q);
        let mut out = GaussPoly::default();
        for ((p, q), c) in terms {
            let prod = fp[p as usize].mul(&sp[q as usize]);
            for (key, cc) in prod.0 {
                out.add_term(key, &cc * &c);
            }
        }
        out
    }
}

/// Coefficients `c_{pq}` of `f(z, z̄) = Σ c_{pq} z^p z̄^q = F₁ + i·F₂`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ComplexCoeffs {
    terms: BTreeMap<(u32, u32), GaussRat>,
}

impl ComplexCoeffs {
    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), GaussRat)>>(terms: I) -> Self {
        let mut g = GaussPoly::default();
        for (k, c) in terms {
            g.add_term(k, c);
        }
        ComplexCoeffs { terms: g.0 }
    }

    /// Exact transform of the real pair under `x = (z + z̄)/2`, `y = (z − z̄)/(2i)`.
    pub fn from_real_pair(f1: &Poly2, f2: &Poly2) -> Self {
        let half = Rat::new(1.into(), 2.into());
        // x = z/2 + z̄/2
        let mut xs = GaussPoly::default();
        xs.add_term((1, 0), GaussRat::real(half.clone()));
        xs.add_term((0, 1), GaussRat::real(half.clone()));
        // y = -i/2 z + i/2 z̄
        let mut ys = GaussPoly::default();
        ys.add_term((1, 0), GaussRat::new(Rat::zero(), -half.clone()));
        ys.add_term((0, 1), GaussRat::new(Rat::zero(), half));

        let mut combined = GaussPoly::default();
        for (m, c) in f1.terms() {
            combined.add_term((m.x, m.y), GaussRat::real(c.clone()));
        }
        for (m, c) in f2.terms() {
            combined.add_term((m.x, m.y), GaussRat::new(Rat::zero(), c.clone()));
        }
        let out = GaussPoly::substitute(combined.0.into_iter(), &xs, &ys);
        ComplexCoeffs { terms: out.0 }
    }

    /// Inverse of [`ComplexCoeffs::from_real_pair`].
    pub fn to_real_pair(&self) -> (Poly2, Poly2) {
        let mut zs = GaussPoly::default();
        zs.add_term((1, 0), GaussRat::one());
        zs.add_term((0, 1), GaussRat::i());
        let mut ws = GaussPoly::default();
        ws.add_term((1, 0), GaussRat::one());
        ws.add_term((0, 1), -&GaussRat::i());
        let out = GaussPoly::substitute(self.terms.iter().map(|(k, c)| (*k, c.clone())), &zs, &ws);
        let f1 = Poly2::from_terms(out.0.iter().map(|(&(i, j), c)| (Monomial::new(i, j), c.re.clone())));
        let f2 = Poly2::from_terms(out.0.iter().map(|(&(i, j), c)| (Monomial::new(i, j), c.im.clone())));
        (f1, f2)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, p: u32, q: u32) -> Option<&GaussRat> {
        self.terms.get(&(p, q))
    }

    /// `((p, q), c_{pq})` in ascending `(p, q)` order.
    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &GaussRat)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }
}

impl fmt::Debug for ComplexCoeffs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}
