//! Helpers around [`BigRational`], the exact coefficient field used everywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

/// Exact rational number, always kept in lowest terms with a positive denominator.
pub type Rat = BigRational;

/// Builds `num/den`. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Nearest rational with denominator `2^bits` to a finite float.
pub fn nearest_dyadic(x: f64, bits: u32) -> Option<Rat> {
    if !x.is_finite() {
        return None;
    }
    let scale = BigInt::one() << bits;
    let exact = Rat::from_f64(x)?;
    let scaled = exact * Rat::from_integer(scale.clone());
    Some(Rat::new(scaled.round().to_integer(), scale))
}

/// Canonical text form: `n` for integers, `n/d` otherwise.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `n` or `n/d` (optionally signed numerator). Rejects a zero denominator.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rat::new(n, d))
}

/// Integer part of `|r|` bounded from above, used for root bounds.
pub(crate) fn ceil_abs(r: &Rat) -> BigInt {
    r.abs().ceil().to_integer()
}
