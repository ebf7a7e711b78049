//! Eigenvalues of the Jacobian: pointwise disk test, global decision for
//! normal-form maps, and a numeric witness search.
//!
//! For a real 2×2 matrix with trace `t` and determinant `d`, both
//! eigenvalues lie strictly inside the unit disk iff
//! `1 − d > 0`, `1 + d − t > 0` and `1 + d + t > 0` (the Schur–Cohn/Jury
//! conditions; the last two together give `d > −1`).

mod sturm;
mod witness;

pub use sturm::{
    isolate_real_roots, non_positivity, rational_root_in, refine, roots_between, sturm_positive, sturm_sequence,
    NonPositivity, RootInterval,
};
pub use witness::{nearest_rational_point, witness_search, SearchConfig, Witness};

use num_traits::{One, Signed};

use crate::mapio::PolyMap;
use crate::normalform::NormalFormData;
use crate::ratpoly::{Poly1, Poly2, Poly2F, Rat, Var};

/// Exact partial derivatives of a map.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JacobianSym {
    /// `[[∂F₁/∂x, ∂F₁/∂y], [∂F₂/∂x, ∂F₂/∂y]]`
    pub entries: [[Poly2; 2]; 2],
}

pub fn jacobian(map: &PolyMap) -> JacobianSym {
    JacobianSym {
        entries: [
            [map.f1.diff(Var::X), map.f1.diff(Var::Y)],
            [map.f2.diff(Var::X), map.f2.diff(Var::Y)],
        ],
    }
}

impl JacobianSym {
    pub fn trace(&self) -> Poly2 {
        &self.entries[0][0] + &self.entries[1][1]
    }

    pub fn det(&self) -> Poly2 {
        let e = &self.entries;
        &(&e[0][0] * &e[1][1]) - &(&e[0][1] * &e[1][0])
    }

    /// Exact `(trace, det)` at a point.
    pub fn trace_det_at(&self, x: &Rat, y: &Rat) -> (Rat, Rat) {
        let v = |i: usize, j: usize| self.entries[i][j].eval(x, y);
        let (a, b, c, d) = (v(0, 0), v(0, 1), v(1, 0), v(1, 1));
        (&a + &d, &a * &d - &b * &c)
    }

    pub fn to_f64(&self) -> JacobianF64 {
        let e = &self.entries;
        JacobianF64 {
            entries: [
                [Poly2F::from(&e[0][0]), Poly2F::from(&e[0][1])],
                [Poly2F::from(&e[1][0]), Poly2F::from(&e[1][1])],
            ],
        }
    }
}

/// Float Jacobian for search loops.
#[derive(Clone, Debug)]
pub struct JacobianF64 {
    entries: [[Poly2F; 2]; 2],
}

impl JacobianF64 {
    pub fn trace_det(&self, x: f64, y: f64) -> (f64, f64) {
        let e = &self.entries;
        let (a, b, c, d) = (
            e[0][0].eval(x, y),
            e[0][1].eval(x, y),
            e[1][0].eval(x, y),
            e[1][1].eval(x, y),
        );
        (a + d, a * d - b * c)
    }

    pub fn spectral_radius(&self, x: f64, y: f64) -> f64 {
        let (t, d) = self.trace_det(x, y);
        spectral_radius_f64(t, d)
    }
}

/// Spectral radius of a real 2×2 matrix from its trace and determinant.
/// Complex pairs have `|λ|² = d`.
pub fn spectral_radius_f64(t: f64, d: f64) -> f64 {
    let disc = t * t - 4.0 * d;
    if disc >= 0.0 {
        (t.abs() + disc.sqrt()) / 2.0
    } else {
        d.max(0.0).sqrt()
    }
}

/// Best float estimate of the spectral radius from exact trace and determinant.
pub fn spectral_radius_exact(t: &Rat, d: &Rat) -> f64 {
    let disc = t * t - d * Rat::from_integer(4.into());
    let tf = crate::ratpoly::to_f64(t);
    if disc.is_negative() {
        crate::ratpoly::to_f64(d).sqrt()
    } else {
        (tf.abs() + crate::ratpoly::to_f64(&disc).sqrt()) / 2.0
    }
}

/// Result of the pointwise Jury test.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiskTest {
    pub inside: bool,
    pub trace: Rat,
    pub det: Rat,
}

/// Strict test: eigenvalues of modulus exactly one count as outside.
pub fn jury_inside(t: &Rat, d: &Rat) -> bool {
    d.abs() < Rat::one() && t.abs() < Rat::one() + d
}

/// Both eigenvalues in the closed unit disk.
pub fn jury_inside_closed(t: &Rat, d: &Rat) -> bool {
    d.abs() <= Rat::one() && t.abs() <= Rat::one() + d
}

pub fn disk_test_at(jac: &JacobianSym, x: &Rat, y: &Rat) -> DiskTest {
    let (trace, det) = jac.trace_det_at(x, y);
    DiskTest {
        inside: jury_inside(&trace, &det),
        trace,
        det,
    }
}

/// Trace and determinant of `JF` as polynomials in `u = a·x + b·y`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnivariateSpectral {
    pub t: Poly1,
    pub d: Poly1,
}

/// The three Jury polynomials in fixed order, with labels.
pub const JURY_LABELS: [&str; 3] = ["1 - d", "1 + d - t", "1 + d + t"];

impl UnivariateSpectral {
    /// `[1 − d, 1 + d − t, 1 + d + t]`.
    pub fn jury_polynomials(&self) -> [Poly1; 3] {
        let one = Poly1::one();
        let one_plus_d = &one + &self.d;
        [&one - &self.d, &one_plus_d - &self.t, &one_plus_d + &self.t]
    }
}

/// `JF = B + r'(u)·(α, β)ᵀ(a, b)`, so
/// `t(u) = tr B + r'(u)(aα + bβ)` and
/// `d(u) = det B + r'(u)·(a, b)·adj(B)·(α, β)ᵀ`.
pub fn univariate_reduce(nf: &NormalFormData) -> UnivariateSpectral {
    let b = &nf.linear;
    let dr = nf.r.derivative();
    let trace_coupling = &nf.a * &nf.alpha + &nf.b * &nf.beta;
    let adj = b.adjugate();
    let adj_v = adj.mul_vec(&[nf.alpha.clone(), nf.beta.clone()]);
    let det_coupling = &nf.a * &adj_v[0] + &nf.b * &adj_v[1];
    UnivariateSpectral {
        t: &Poly1::constant(b.trace()) + &dr.scale(&trace_coupling),
        d: &Poly1::constant(b.det()) + &dr.scale(&det_coupling),
    }
}

/// `true` iff the strict Jury conditions hold for every real `u`.
pub fn global_disk_decision(us: &UnivariateSpectral) -> bool {
    us.jury_polynomials().iter().all(sturm_positive)
}
