//! Sparse bivariate polynomials over exact rationals.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use thiserror::Error;

use super::mat::Mat2;
use super::poly1::Poly1;
use super::rat::{format_rat, to_f64, Rat};

/// Exponent pair `x^x · y^y`.
///
/// Ordered graded-lexicographically: total degree ascending, then the
/// power of `x` descending. "First monomial" always refers to this order.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    pub x: u32,
    pub y: u32,
}

impl Monomial {
    pub const fn new(x: u32, y: u32) -> Self {
        Monomial { x, y }
    }

    pub fn degree(self) -> u32 {
        self.x + self.y
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.x.cmp(&self.x))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    X,
    Y,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomial is not a function of {a}*x + {b}*y")]
    NotAFunctionOfU { a: String, b: String },
    #[error("direction (0, 0) does not define a linear form")]
    ZeroDirection,
}

/// Polynomial in `x, y` with rational coefficients. No stored coefficient is zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly2 {
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::term(0, 0, c)
    }

    pub fn x() -> Self {
        Self::term(1, 0, Rat::one())
    }

    pub fn y() -> Self {
        Self::term(0, 1, Rat::one())
    }

    pub fn term(i: u32, j: u32, c: Rat) -> Self {
        let mut p = Poly2::zero();
        p.add_term(Monomial::new(i, j), c);
        p
    }

    /// Linear form `a·x + b·y`.
    pub fn linear(a: &Rat, b: &Rat) -> Self {
        Self::from_terms([(Monomial::new(1, 0), a.clone()), (Monomial::new(0, 1), b.clone())])
    }

    /// Sums the given terms; repeated monomials accumulate.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rat)>>(terms: I) -> Self {
        let mut p = Poly2::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms.keys().map(|m| m.degree() as i64).max().unwrap_or(-1)
    }

    /// Lowest total degree present; `None` for zero.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (Monomial, &Rat)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rat {
        self.terms.get(&Monomial::new(i, j)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn first_monomial(&self) -> Option<Monomial> {
        self.terms.keys().next().copied()
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(0, 0)
    }

    /// Terms whose total degree lies in `range`.
    pub fn degree_range(&self, lo: u32, hi: u32) -> Poly2 {
        Poly2 {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| (lo..=hi).contains(&m.degree()))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &Rat) -> Poly2 {
        if k.is_zero() {
            return Poly2::zero();
        }
        Poly2 {
            terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly2 {
        let mut base = self.clone();
        let mut acc = Poly2::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn diff(&self, var: Var) -> Poly2 {
        let mut out = Poly2::zero();
        for (m, c) in &self.terms {
            match var {
                Var::X if m.x > 0 => out.add_term(
                    Monomial::new(m.x - 1, m.y),
                    c * Rat::from(num_bigint::BigInt::from(m.x)),
                ),
                Var::Y if m.y > 0 => out.add_term(
                    Monomial::new(m.x, m.y - 1),
                    c * Rat::from(num_bigint::BigInt::from(m.y)),
                ),
                _ => {}
            }
        }
        out
    }

    /// Exact value at `(x, y)`, by Horner's rule in `y` within each power
    /// of `x` and then Horner's rule in `x`.
    pub fn eval(&self, x: &Rat, y: &Rat) -> Rat {
        let mut rows: BTreeMap<u32, Vec<(u32, &Rat)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            rows.entry(m.x).or_default().push((m.y, c));
        }
        let horner_y = |row: &mut Vec<(u32, &Rat)>| -> Rat {
            row.sort_by_key(|e| std::cmp::Reverse(e.0));
            let mut acc = Rat::zero();
            let mut last = row[0].0;
            for (j, c) in row.iter() {
                for _ in *j..last {
                    acc *= y;
                }
                acc += *c;
                last = *j;
            }
            for _ in 0..last {
                acc *= y;
            }
            acc
        };
        let mut acc = Rat::zero();
        let mut last: Option<u32> = None;
        for (i, row) in rows.iter_mut().rev() {
            if let Some(l) = last {
                for _ in *i..l {
                    acc *= x;
                }
            }
            acc += horner_y(row);
            last = Some(*i);
        }
        if let Some(l) = last {
            for _ in 0..l {
                acc *= x;
            }
        }
        acc
    }

    /// Float evaluation for search code; see [`Poly2F`] for repeated use.
    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        Poly2F::from(self).eval(x, y)
    }

    /// Composition `f(M·(x, y)ᵀ + t)`.
    pub fn subst_linear(&self, m: &Mat2, t: Option<&[Rat; 2]>) -> Poly2 {
        let mut xs = Poly2::linear(m.get(0, 0), m.get(0, 1));
        let mut ys = Poly2::linear(m.get(1, 0), m.get(1, 1));
        if let Some(t) = t {
            xs = &xs + &Poly2::constant(t[0].clone());
            ys = &ys + &Poly2::constant(t[1].clone());
        }
        self.compose(&xs, &ys)
    }

    /// Substitutes `x := xs`, `y := ys`.
    pub fn compose(&self, xs: &Poly2, ys: &Poly2) -> Poly2 {
        let max_i = self.terms.keys().map(|m| m.x).max().unwrap_or(0);
        let max_j = self.terms.keys().map(|m| m.y).max().unwrap_or(0);
        let xp = powers(xs, max_i);
        let yp = powers(ys, max_j);
        let mut out = Poly2::zero();
        for (m, c) in &self.terms {
            let prod = &xp[m.x as usize] * &yp[m.y as usize];
            for (mm, cc) in prod.terms {
                out.add_term(mm, cc * c);
            }
        }
        out
    }

    /// Homogeneous components in ascending degree; empty for zero.
    pub fn homog_components(&self) -> Vec<(u32, Poly2)> {
        let mut out: Vec<(u32, Poly2)> = Vec::new();
        for (m, c) in &self.terms {
            match out.last_mut() {
                Some((d, p)) if *d == m.degree() => {
                    p.terms.insert(*m, c.clone());
                }
                _ => out.push((m.degree(), Poly2::term(m.x, m.y, c.clone()))),
            }
        }
        out
    }

    /// Returns `ρ` with `ρ(a·x + b·y) = self`.
    ///
    /// Extracts along `y = 0` when `a ≠ 0`, else along `x = 0`, then
    /// verifies by resubstitution.
    pub fn restrict_to_line(&self, a: &Rat, b: &Rat) -> Result<Poly1, PolyError> {
        let rho = if !a.is_zero() {
            let inv = Rat::one() / a;
            Poly1::from_terms(
                self.terms
                    .iter()
                    .filter(|(m, _)| m.y == 0)
                    .map(|(m, c)| (m.x, c * pow_rat(&inv, m.x))),
            )
        } else if !b.is_zero() {
            let inv = Rat::one() / b;
            Poly1::from_terms(
                self.terms
                    .iter()
                    .filter(|(m, _)| m.x == 0)
                    .map(|(m, c)| (m.y, c * pow_rat(&inv, m.y))),
            )
        } else {
            return Err(PolyError::ZeroDirection);
        };
        if &rho.lift_linear(a, b) != self {
            return Err(PolyError::NotAFunctionOfU {
                a: format_rat(a),
                b: format_rat(b),
            });
        }
        Ok(rho)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| to_f64(c).abs()).fold(0.0, f64::max)
    }
}

pub(crate) fn pow_rat(r: &Rat, e: u32) -> Rat {
    num_traits::pow::pow(r.clone(), e as usize)
}

fn powers(p: &Poly2, n: u32) -> Vec<Poly2> {
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(Poly2::one());
    for k in 1..=n as usize {
        let next = &out[k - 1] * p;
        out.push(next);
    }
    out
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Canonical text: graded-lex order, explicit `*`, rationals as `num/den`.
impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = c < &Rat::zero();
            let magnitude = if negative { -c.clone() } else { c.clone() };
            match (k, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if !magnitude.is_one() || m.degree() == 0 {
                factors.push(format_rat(&magnitude));
            }
            for (name, e) in [("x", m.x), ("y", m.y)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

fn merge(lhs: &Poly2, rhs: &Poly2, sign: bool) -> Poly2 {
    let mut out = lhs.clone();
    for (m, c) in &rhs.terms {
        out.add_term(*m, if sign { c.clone() } else { -c.clone() });
    }
    out
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        merge(self, rhs, true)
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        merge(self, rhs, false)
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(Monomial::new(m1.x + m2.x, m1.y + m2.y), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        Poly2 {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr for Poly2 {
            type Output = Poly2;
            fn $method(self, rhs: Poly2) -> Poly2 {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Poly2> for Poly2 {
            type Output = Poly2;
            fn $method(self, rhs: &Poly2) -> Poly2 {
                (&self).$method(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        -&self
    }
}

/// Float snapshot of a [`Poly2`] for hot loops (witness search, orbits).
#[derive(Clone, Debug)]
pub struct Poly2F {
    terms: Vec<(u32, u32, f64)>,
    max_x: u32,
    max_y: u32,
}

impl From<&Poly2> for Poly2F {
    fn from(p: &Poly2) -> Self {
        let terms: Vec<(u32, u32, f64)> = p.terms().map(|(m, c)| (m.x, m.y, to_f64(c))).collect();
        let max_x = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let max_y = terms.iter().map(|t| t.1).max().unwrap_or(0);
        Poly2F { terms, max_x, max_y }
    }
}

impl Poly2F {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        if self.terms.is_empty() {
            return 0.0;
        }
        let mut xp = [1.0f64; 65];
        let mut yp = [1.0f64; 65];
        if self.max_x as usize >= xp.len() || self.max_y as usize >= yp.len() {
            return self
                .terms
                .iter()
                .map(|&(i, j, c)| c * x.powi(i as i32) * y.powi(j as i32))
                .sum();
        }
        for k in 1..=self.max_x as usize {
            xp[k] = xp[k - 1] * x;
        }
        for k in 1..=self.max_y as usize {
            yp[k] = yp[k - 1] * y;
        }
        self.terms
            .iter()
            .map(|&(i, j, c)| c * xp[i as usize] * yp[j as usize])
            .sum()
    }
}
