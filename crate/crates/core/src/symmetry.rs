//! Linear orthogonal symmetries of a planar polynomial map.
//!
//! Works in the complex form `f(z, z̄) = Σ c_{pq} z^p z̄^q`. For a term
//! write `m = p − q − 1`. Then
//!
//! * rotation by `θ` is a symmetry iff `m·θ ∈ 2πℤ` for every term, and
//! * the reflection `z ↦ e^{2iφ} z̄` (axis at angle `φ`) is a symmetry iff
//!   `c·e^{2iφm} = c̄` for every term.
//!
//! Only symmetries that are orthogonal in the given coordinates are found;
//! no search over conjugating changes of basis is attempted.

use std::f64::consts::PI;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::mapio::PolyMap;
use crate::ratpoly::{ComplexCoeffs, GaussRat, Mat2, Poly2, Rat};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Candidate angles closer than this to a multiple of π/4 are checked exactly.
const SNAP: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymmetryError {
    #[error("the zero map commutes with all of O(2)")]
    ZeroMap,
    #[error("matrix is not orthogonal")]
    NotOrthogonal,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RotationOrder {
    Finite(u32),
    Continuous,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Classification {
    Trivial,
    Z2MinusIdentity,
    Zn(u32),
    Z2Reflection,
    Dn(u32),
    SO2,
    O2,
}

impl Classification {
    pub fn from_parts(rotation: RotationOrder, reflection: bool) -> Self {
        match (rotation, reflection) {
            (RotationOrder::Finite(1), false) => Classification::Trivial,
            (RotationOrder::Finite(2), false) => Classification::Z2MinusIdentity,
            (RotationOrder::Finite(n), false) => Classification::Zn(n),
            (RotationOrder::Finite(1), true) => Classification::Z2Reflection,
            (RotationOrder::Finite(n), true) => Classification::Dn(n),
            (RotationOrder::Continuous, false) => Classification::SO2,
            (RotationOrder::Continuous, true) => Classification::O2,
        }
    }

    /// Machine name used in JSON.
    pub fn key(self) -> &'static str {
        match self {
            Classification::Trivial => "Trivial",
            Classification::Z2MinusIdentity => "Z2_minus_identity",
            Classification::Zn(_) => "Zn",
            Classification::Z2Reflection => "Z2_reflection",
            Classification::Dn(_) => "Dn",
            Classification::SO2 => "SO2",
            Classification::O2 => "O2",
        }
    }

    pub fn is_trivial(self) -> bool {
        self == Classification::Trivial
    }

    /// Either of the two order-two groups.
    pub fn is_z2(self) -> bool {
        matches!(self, Classification::Z2MinusIdentity | Classification::Z2Reflection)
    }
}

/// Short group name: `1`, `Z2`, `Z4`, `D3`, `SO(2)`, `O(2)`.
impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Trivial => write!(f, "Trivial"),
            Classification::Z2MinusIdentity | Classification::Z2Reflection => write!(f, "Z2"),
            Classification::Zn(n) => write!(f, "Z{n}"),
            Classification::Dn(n) => write!(f, "D{n}"),
            Classification::SO2 => write!(f, "SO(2)"),
            Classification::O2 => write!(f, "O(2)"),
        }
    }
}

/// A group element as a matrix: exact when its entries are rational.
#[derive(Clone, PartialEq, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum GroupMatrix {
    Exact(Mat2),
    Float([[f64; 2]; 2]),
}

impl GroupMatrix {
    pub fn to_f64(&self) -> [[f64; 2]; 2] {
        match self {
            GroupMatrix::Exact(m) => m.to_f64(),
            GroupMatrix::Float(m) => *m,
        }
    }

    /// Rotation by `2π/n`.
    pub fn rotation(n: u32) -> Self {
        let (o, z) = (Rat::one(), Rat::zero());
        match n {
            1 => GroupMatrix::Exact(Mat2::identity()),
            2 => GroupMatrix::Exact(Mat2::identity().scale(&-o)),
            4 => GroupMatrix::Exact(Mat2::new(z.clone(), -o.clone(), o, z)),
            _ => Self::rotation_by(2.0 * PI / n as f64),
        }
    }

    pub fn rotation_by(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        GroupMatrix::Float([[c, -s], [s, c]])
    }

    /// Reflection `z ↦ e^{2iφ} z̄` across the line at angle `φ`.
    pub fn reflection(phi: f64) -> Self {
        if let Some(k) = quarter_turn_index(phi) {
            let w = unit_gauss(k);
            return GroupMatrix::Exact(Mat2::new(w.re.clone(), w.im.clone(), w.im, -w.re));
        }
        let (s, c) = (2.0 * phi).sin_cos();
        GroupMatrix::Float([[c, s], [s, -c]])
    }
}

/// Reflection axes found for a map.
#[derive(Clone, PartialEq, Debug)]
pub enum ReflectionAxes {
    /// Every line through the origin is an axis.
    All,
    /// Axis angles in `[0, π)`, ascending.
    Finite(Vec<f64>),
}

impl ReflectionAxes {
    pub fn is_empty(&self) -> bool {
        matches!(self, ReflectionAxes::Finite(v) if v.is_empty())
    }

    pub fn smallest(&self) -> Option<f64> {
        match self {
            ReflectionAxes::All => Some(0.0),
            ReflectionAxes::Finite(v) => v.first().copied(),
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct SymmetryGroup {
    pub rotation_order: RotationOrder,
    pub has_reflection: bool,
    pub reflection_axis_angle: Option<f64>,
    pub reflection_axes: ReflectionAxes,
    pub classification: Classification,
    pub generators: Vec<GroupMatrix>,
}

fn term_exponent(p: u32, q: u32) -> i64 {
    p as i64 - q as i64 - 1
}

impl SymmetryGroup {
    /// Group name with the reflection axes spelled out, e.g.
    /// `Z2 (reflection, axis 0)` or `Z2 (-I)`.
    pub fn describe(&self) -> String {
        let name = self.classification.to_string();
        match (&self.classification, &self.reflection_axes) {
            (Classification::Z2MinusIdentity, _) => format!("{name} (-I)"),
            (_, ReflectionAxes::Finite(axes)) if !axes.is_empty() => {
                let list: Vec<String> = axes.iter().map(|a| format!("{a}")).collect();
                let label = if axes.len() == 1 { "axis" } else { "axes" };
                format!("{name} (reflection, {label} {})", list.join(", "))
            }
            _ => name,
        }
    }
}

/// Largest `n` with rotation by `2π/n` a symmetry, or `Continuous`.
pub fn rotation_subgroup(cc: &ComplexCoeffs) -> Result<RotationOrder, SymmetryError> {
    if cc.is_zero() {
        return Err(SymmetryError::ZeroMap);
    }
    let g = cc
        .terms()
        .map(|((p, q), _)| term_exponent(p, q).unsigned_abs())
        .fold(0u64, |acc, m| acc.gcd(&m));
    Ok(if g == 0 {
        RotationOrder::Continuous
    } else {
        RotationOrder::Finite(g as u32)
    })
}

/// `k` with `φ ≈ kπ/4`, `k ∈ 0..4`.
fn quarter_turn_index(phi: f64) -> Option<u32> {
    let t = phi / (PI / 4.0);
    let k = t.round();
    ((t - k).abs() * (PI / 4.0) < SNAP).then(|| (k as i64).rem_euclid(4) as u32)
}

/// `e^{2iφ}` for `φ = kπ/4`: `1, i, −1, −i`.
fn unit_gauss(k: u32) -> GaussRat {
    let (o, z) = (Rat::one(), Rat::zero());
    match k % 4 {
        0 => GaussRat::new(o, z),
        1 => GaussRat::new(z, o),
        2 => GaussRat::new(-o, z),
        _ => GaussRat::new(z, -o),
    }
}

fn reflection_holds_exact(cc: &ComplexCoeffs, k: u32) -> bool {
    let w = unit_gauss(k);
    cc.terms()
        .all(|((p, q), c)| c * &w.powi(term_exponent(p, q)) == c.conj())
}

fn reflection_holds_float(cc: &ComplexCoeffs, phi: f64, tol: f64) -> bool {
    cc.terms().all(|((p, q), c)| {
        let (re, im) = c.to_f64();
        let angle = 2.0 * phi * term_exponent(p, q) as f64;
        let (s, co) = angle.sin_cos();
        let lhs = (re * co - im * s, re * s + im * co);
        let scale = re.hypot(im).max(1.0);
        (lhs.0 - re).hypot(lhs.1 + im) <= tol * scale
    })
}

/// All reflection axes `φ ∈ [0, π)` of the map with complex form `cc`.
pub fn reflection_axes(cc: &ComplexCoeffs, tol: f64) -> ReflectionAxes {
    let reference = cc
        .terms()
        .filter(|((p, q), _)| term_exponent(*p, *q) != 0)
        .min_by_key(|((p, q), _)| term_exponent(*p, *q).unsigned_abs());
    let Some(((p, q), c)) = reference else {
        return if cc.terms().all(|(_, c)| c.is_real()) {
            ReflectionAxes::All
        } else {
            ReflectionAxes::Finite(Vec::new())
        };
    };
    let m = term_exponent(p, q);
    let (re, im) = c.to_f64();
    let theta = im.atan2(re);
    // e^{2iφm} = c̄/c = e^{-2iθ}  ⇔  φ = (kπ - θ)/m  (mod π)
    let mut axes: Vec<f64> = Vec::new();
    for k in 0..(2 * m.unsigned_abs()) {
        let phi = ((k as f64 * PI - theta) / m as f64).rem_euclid(PI);
        let phi = if PI - phi < SNAP { 0.0 } else { phi };
        if axes.iter().any(|a| (a - phi).abs() < SNAP) {
            continue;
        }
        let accepted = match quarter_turn_index(phi) {
            Some(k) if reflection_holds_exact(cc, k) => {
                axes.push(k as f64 * PI / 4.0);
                continue;
            }
            _ => reflection_holds_float(cc, phi, tol),
        };
        if accepted {
            axes.push(phi);
        }
    }
    axes.sort_by(f64::total_cmp);
    ReflectionAxes::Finite(axes)
}

/// The full group of orthogonal symmetries, with generators.
///
/// For `SO2`/`O2` the rotation generator is rotation by one radian, which
/// generates a dense subgroup.
pub fn classify(map: &PolyMap, tol: f64) -> SymmetryGroup {
    let cc = map.to_complex();
    let (rotation_order, axes) = match rotation_subgroup(&cc) {
        Ok(order) => (order, reflection_axes(&cc, tol)),
        Err(SymmetryError::ZeroMap) | Err(SymmetryError::NotOrthogonal) => {
            (RotationOrder::Continuous, ReflectionAxes::All)
        }
    };
    let has_reflection = !axes.is_empty();
    let classification = Classification::from_parts(rotation_order, has_reflection);
    let mut generators = Vec::new();
    match rotation_order {
        RotationOrder::Finite(n) if n >= 2 => generators.push(GroupMatrix::rotation(n)),
        RotationOrder::Finite(_) => {}
        RotationOrder::Continuous => generators.push(GroupMatrix::rotation_by(1.0)),
    }
    let axis = axes.smallest();
    if let Some(phi) = axis {
        generators.push(GroupMatrix::reflection(phi));
    }
    SymmetryGroup {
        rotation_order,
        has_reflection,
        reflection_axis_angle: axis,
        reflection_axes: axes,
        classification,
        generators,
    }
}

/// Float coefficients of a polynomial, indexed by exponent pair.
type FloatPoly = std::collections::BTreeMap<(u32, u32), f64>;

fn float_poly(p: &Poly2) -> FloatPoly {
    p.terms()
        .map(|(m, c)| ((m.x, m.y), crate::ratpoly::to_f64(c)))
        .collect()
}

fn float_mul(a: &FloatPoly, b: &FloatPoly) -> FloatPoly {
    let mut out = FloatPoly::new();
    for (&(i1, j1), c1) in a {
        for (&(i2, j2), c2) in b {
            *out.entry((i1 + i2, j1 + j2)).or_insert(0.0) += c1 * c2;
        }
    }
    out
}

fn float_subst(p: &FloatPoly, g: &[[f64; 2]; 2]) -> FloatPoly {
    let xs: FloatPoly = [((1, 0), g[0][0]), ((0, 1), g[0][1])].into_iter().collect();
    let ys: FloatPoly = [((1, 0), g[1][0]), ((0, 1), g[1][1])].into_iter().collect();
    let max_i = p.keys().map(|k| k.0).max().unwrap_or(0) as usize;
    let max_j = p.keys().map(|k| k.1).max().unwrap_or(0) as usize;
    let mut xp = vec![FloatPoly::from([((0, 0), 1.0)])];
    for k in 1..=max_i {
        xp.push(float_mul(&xp[k - 1], &xs));
    }
    let mut yp = vec![FloatPoly::from([((0, 0), 1.0)])];
    for k in 1..=max_j {
        yp.push(float_mul(&yp[k - 1], &ys));
    }
    let mut out = FloatPoly::new();
    for (&(i, j), c) in p {
        for (k, v) in float_mul(&xp[i as usize], &yp[j as usize]) {
            *out.entry(k).or_insert(0.0) += c * v;
        }
    }
    out
}

/// Checks `F(γ·v) = γ·F(v)`: exactly for rational `γ`, within `tol`
/// (relative to the largest coefficient) otherwise.
pub fn is_equivariant(map: &PolyMap, gamma: &GroupMatrix, tol: f64) -> Result<bool, SymmetryError> {
    match gamma {
        GroupMatrix::Exact(g) => {
            if g.transpose().mul(g) != Mat2::identity() {
                return Err(SymmetryError::NotOrthogonal);
            }
            Ok(map.compose_linear(g) == map.apply_linear(g))
        }
        GroupMatrix::Float(g) => {
            let gtg = [
                [
                    g[0][0] * g[0][0] + g[1][0] * g[1][0],
                    g[0][0] * g[0][1] + g[1][0] * g[1][1],
                ],
                [
                    g[0][1] * g[0][0] + g[1][1] * g[1][0],
                    g[0][1] * g[0][1] + g[1][1] * g[1][1],
                ],
            ];
            let off = (gtg[0][0] - 1.0).abs() + (gtg[1][1] - 1.0).abs() + gtg[0][1].abs() + gtg[1][0].abs();
            if off > tol.max(1e-12) * 4.0 {
                return Err(SymmetryError::NotOrthogonal);
            }
            let f1 = float_poly(&map.f1);
            let f2 = float_poly(&map.f2);
            let lhs = [float_subst(&f1, g), float_subst(&f2, g)];
            let mut rhs = [FloatPoly::new(), FloatPoly::new()];
            for (row, out) in rhs.iter_mut().enumerate() {
                for (src, weight) in [(&f1, g[row][0]), (&f2, g[row][1])] {
                    for (k, c) in src {
                        *out.entry(*k).or_insert(0.0) += weight * c;
                    }
                }
            }
            let scale = map.f1.max_abs_coeff().max(map.f2.max_abs_coeff()).max(1.0);
            let ok = (0..2).all(|k| {
                let keys = lhs[k].keys().chain(rhs[k].keys());
                keys.into_iter().all(|key| {
                    let a = lhs[k].get(key).copied().unwrap_or(0.0);
                    let b = rhs[k].get(key).copied().unwrap_or(0.0);
                    (a - b).abs() <= tol * scale
                })
            });
            Ok(ok)
        }
    }
}
