//! Sparse univariate polynomials over exact rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly2::{pow_rat, Poly2};
use super::rat::{format_rat, to_f64, Rat};

/// Polynomial in one variable `u`. No stored coefficient is zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly1 {
    coeffs: BTreeMap<u32, Rat>,
}

impl Poly1 {
    pub fn zero() -> Self {
        Poly1::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(k: u32, c: Rat) -> Self {
        let mut p = Poly1::zero();
        p.add_term(k, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, Rat)>>(terms: I) -> Self {
        let mut p = Poly1::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    /// Dense coefficients, constant term first.
    pub fn from_dense(coeffs: &[Rat]) -> Self {
        Self::from_terms(coeffs.iter().enumerate().map(|(k, c)| (k as u32, c.clone())))
    }

    fn add_term(&mut self, k: u32, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(k).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.coeffs.keys().next_back().map(|&k| k as i64).unwrap_or(-1)
    }

    /// Lowest exponent present.
    pub fn low_degree(&self) -> Option<u32> {
        self.coeffs.keys().next().copied()
    }

    pub fn coeff(&self, k: u32) -> Rat {
        self.coeffs.get(&k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading_coeff(&self) -> Rat {
        self.coeffs.values().next_back().cloned().unwrap_or_else(Rat::zero)
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (u32, &Rat)> + '_ {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn eval(&self, u: &Rat) -> Rat {
        let mut acc = Rat::zero();
        let mut last = match self.coeffs.keys().next_back() {
            Some(&k) => k,
            None => return acc,
        };
        for (&k, c) in self.coeffs.iter().rev() {
            for _ in k..last {
                acc *= u;
            }
            acc += c;
            last = k;
        }
        for _ in 0..last {
            acc *= u;
        }
        acc
    }

    pub fn eval_f64(&self, u: f64) -> f64 {
        let mut acc = 0.0;
        let mut last = match self.coeffs.keys().next_back() {
            Some(&k) => k,
            None => return 0.0,
        };
        for (&k, c) in self.coeffs.iter().rev() {
            acc *= u.powi((last - k) as i32);
            acc += to_f64(c);
            last = k;
        }
        acc * u.powi(last as i32)
    }

    pub fn derivative(&self) -> Poly1 {
        Poly1::from_terms(
            self.coeffs
                .iter()
                .filter(|(k, _)| **k > 0)
                .map(|(k, c)| (k - 1, c * Rat::from(BigInt::from(*k)))),
        )
    }

    pub fn scale(&self, k: &Rat) -> Poly1 {
        if k.is_zero() {
            return Poly1::zero();
        }
        Poly1 {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    /// Divides by `u^k`; `None` if a term of degree `< k` is present.
    pub fn shift_down(&self, k: u32) -> Option<Poly1> {
        if self.low_degree().is_some_and(|low| low < k) {
            return None;
        }
        Some(Poly1 {
            coeffs: self.coeffs.iter().map(|(e, c)| (e - k, c.clone())).collect(),
        })
    }

    pub fn shift_up(&self, k: u32) -> Poly1 {
        Poly1 {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly1) -> (Poly1, Poly1) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree();
        let lc = divisor.leading_coeff();
        let mut quotient = Poly1::zero();
        let mut rem = self.clone();
        while rem.degree() >= dd {
            let shift = (rem.degree() - dd) as u32;
            let factor = rem.leading_coeff() / &lc;
            let step = divisor.shift_up(shift).scale(&factor);
            rem = &rem - &step;
            quotient.add_term(shift, factor);
        }
        (quotient, rem)
    }

    pub fn monic(&self) -> Poly1 {
        if self.is_zero() {
            return Poly1::zero();
        }
        self.scale(&(Rat::one() / self.leading_coeff()))
    }

    /// Positive rational multiple with coprime integer coefficients.
    /// The sign of every coefficient is preserved.
    pub fn primitive_positive(&self) -> Poly1 {
        if self.is_zero() {
            return Poly1::zero();
        }
        let mut lcm = BigInt::one();
        for c in self.coeffs.values() {
            lcm = lcm.lcm(c.denom());
        }
        let mut gcd = BigInt::zero();
        for c in self.coeffs.values() {
            let n = c.numer() * (&lcm / c.denom());
            gcd = gcd.gcd(&n);
        }
        self.scale(&Rat::new(lcm, gcd.abs()))
    }

    /// Monic greatest common divisor (zero iff both inputs are zero).
    pub fn gcd(&self, other: &Poly1) -> Poly1 {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.primitive_positive();
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors, monic; zero stays zero.
    pub fn squarefree(&self) -> Poly1 {
        if self.degree() <= 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// `self(a·x + b·y)` as a bivariate polynomial.
    pub fn lift_linear(&self, a: &Rat, b: &Rat) -> Poly2 {
        let line = Poly2::linear(a, b);
        let mut out = Poly2::zero();
        let mut power = Poly2::one();
        let mut at = 0u32;
        for (&k, c) in &self.coeffs {
            while at < k {
                power = &power * &line;
                at += 1;
            }
            out = &out + &power.scale(c);
        }
        out
    }

    /// Substitutes `u := k·u`.
    pub fn rescale_var(&self, k: &Rat) -> Poly1 {
        Poly1 {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, c)| (*e, c * pow_rat(k, *e)))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    /// Cauchy bound: every real root `r` satisfies `|r| < bound`.
    pub fn root_bound(&self) -> Rat {
        let lc = self.leading_coeff().abs();
        let top = self.degree();
        let mut max = Rat::zero();
        for (k, c) in &self.coeffs {
            if (*k as i64) < top {
                let ratio = c.abs() / &lc;
                if ratio > max {
                    max = ratio;
                }
            }
        }
        Rat::one() + Rat::from(super::rat::ceil_abs(&max))
    }
}

impl fmt::Debug for Poly1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Poly1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.coeffs.iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let coeff = (!mag.is_one() || *k == 0).then(|| format_rat(&mag));
            let var = match k {
                0 => None,
                1 => Some("u".to_string()),
                _ => Some(format!("u^{k}")),
            };
            match (coeff, var) {
                (Some(c), Some(v)) => write!(f, "{c}*{v}")?,
                (Some(c), None) => write!(f, "{c}")?,
                (None, Some(v)) => write!(f, "{v}")?,
                (None, None) => unreachable!(),
            }
        }
        Ok(())
    }
}

impl Add for &Poly1 {
    type Output = Poly1;
    fn add(self, rhs: &Poly1) -> Poly1 {
        let mut out = self.clone();
        for (k, c) in &rhs.coeffs {
            out.add_term(*k, c.clone());
        }
        out
    }
}

impl Sub for &Poly1 {
    type Output = Poly1;
    fn sub(self, rhs: &Poly1) -> Poly1 {
        let mut out = self.clone();
        for (k, c) in &rhs.coeffs {
            out.add_term(*k, -c.clone());
        }
        out
    }
}

impl Mul for &Poly1 {
    type Output = Poly1;
    fn mul(self, rhs: &Poly1) -> Poly1 {
        let mut out = Poly1::zero();
        for (k1, c1) in &self.coeffs {
            for (k2, c2) in &rhs.coeffs {
                out.add_term(k1 + k2, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly1 {
    type Output = Poly1;
    fn neg(self) -> Poly1 {
        self.scale(&-Rat::one())
    }
}
