//! Rank-one normal form `F = B·(x, y)ᵀ + u²p(u)·(α, β)ᵀ`, `u = a·x + b·y`.
//!
//! Every fixed-origin polynomial map whose Jacobian spectrum stays inside
//! the unit disk has this shape. [`decompose`] recognises it exactly and
//! returns a canonical decomposition, or the first structural reason the
//! map cannot have it.
//!
//! Canonical form: `(a, b)` has first nonzero entry `1`, `r(u) = u²p(u)` is
//! monic, and the leading coefficient is folded into `(α, β)`. A linear map
//! is `p = 0`, `(a, b) = (1, 0)`, `(α, β) = (0, 0)`.

use std::fmt;

use num_traits::{One, Zero};

use crate::mapio::PolyMap;
use crate::ratpoly::{Mat2, Poly1, Poly2, Rat, Var};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NormalFormData {
    /// The linear part `B = JF(0, 0)`.
    pub linear: Mat2,
    pub a: Rat,
    pub b: Rat,
    pub alpha: Rat,
    pub beta: Rat,
    pub p: Poly1,
    /// Cached `r(u) = u²·p(u)`.
    pub r: Poly1,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum FailureReason {
    OriginNotFixed,
    NonProportional,
    NotSingleLinearForm,
}

impl FailureReason {
    pub fn as_str(self) -> &'static str {
        match self {
            FailureReason::OriginNotFixed => "OriginNotFixed",
            FailureReason::NonProportional => "NonProportional",
            FailureReason::NotSingleLinearForm => "NotSingleLinearForm",
        }
    }
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DecomposeFailure {
    pub reason: FailureReason,
    pub detail: String,
}

impl NormalFormData {
    /// The linear map `B·(x, y)ᵀ` in canonical form.
    pub fn linear_only(linear: Mat2) -> Self {
        NormalFormData {
            linear,
            a: Rat::one(),
            b: Rat::zero(),
            alpha: Rat::zero(),
            beta: Rat::zero(),
            p: Poly1::zero(),
            r: Poly1::zero(),
        }
    }

    /// Builds data from raw parameters and brings it to canonical form.
    /// Returns `None` when `(a, b) = (0, 0)` with a nonzero nonlinear part.
    pub fn normalized(linear: Mat2, a: Rat, b: Rat, alpha: Rat, beta: Rat, p: Poly1) -> Option<Self> {
        if p.is_zero() || (alpha.is_zero() && beta.is_zero()) {
            return Some(Self::linear_only(linear));
        }
        let lead = if !a.is_zero() { a.clone() } else { b.clone() };
        if lead.is_zero() {
            return None;
        }
        let (a, b) = (&a / &lead, &b / &lead);
        // r(u) with u scaled: r(lead·u')
        let r = p.shift_up(2).rescale_var(&lead);
        let lc = r.leading_coeff();
        Some(NormalFormData {
            linear,
            a,
            b,
            alpha: &alpha * &lc,
            beta: &beta * &lc,
            p: r.monic().shift_down(2).expect("r has no terms below degree 2"),
            r: r.monic(),
        })
    }

    pub fn is_linear(&self) -> bool {
        self.r.is_zero()
    }

    /// The nonlinear part `r(a·x + b·y)·(α, β)ᵀ`.
    pub fn nonlinear_part(&self) -> (Poly2, Poly2) {
        let lifted = self.r.lift_linear(&self.a, &self.b);
        (lifted.scale(&self.alpha), lifted.scale(&self.beta))
    }
}

/// `B·(x, y)ᵀ + r(a·x + b·y)·(α, β)ᵀ`, expanded.
pub fn reconstruct(nf: &NormalFormData) -> PolyMap {
    let m = &nf.linear;
    let (n1, n2) = nf.nonlinear_part();
    let f1 = &Poly2::linear(m.get(0, 0), m.get(0, 1)) + &n1;
    let f2 = &Poly2::linear(m.get(1, 0), m.get(1, 1)) + &n2;
    PolyMap::from_parts(f1, f2)
}

/// Splits `F` into `JF(0, 0)` and the part of total degree `≥ 2`.
pub fn split_linear(map: &PolyMap) -> Result<(Mat2, Poly2, Poly2), DecomposeFailure> {
    if !map.fixes_origin() {
        return Err(DecomposeFailure {
            reason: FailureReason::OriginNotFixed,
            detail: format!(
                "F(0, 0) = ({}, {}) is not the origin",
                crate::ratpoly::format_rat(&map.f1.constant_term()),
                crate::ratpoly::format_rat(&map.f2.constant_term())
            ),
        });
    }
    let linear = Mat2::new(
        map.f1.coeff(1, 0),
        map.f1.coeff(0, 1),
        map.f2.coeff(1, 0),
        map.f2.coeff(0, 1),
    );
    let cap = u32::MAX;
    Ok((linear, map.f1.degree_range(2, cap), map.f2.degree_range(2, cap)))
}

/// Finds `(α, β, r₂)` with `N₁ = α·r₂` and `N₂ = β·r₂`.
///
/// If such constants exist, the coefficients of any monomial `μ` in the
/// common factor are proportional to `(α, β)`, so the pair read off the
/// first monomial is the only candidate up to scale; a single exact
/// cross-multiplication test decides.
pub fn proportional(n1: &Poly2, n2: &Poly2) -> Option<(Rat, Rat, Poly2)> {
    match (n1.is_zero(), n2.is_zero()) {
        (true, true) => return Some((Rat::zero(), Rat::zero(), Poly2::zero())),
        (true, false) => return Some((Rat::zero(), Rat::one(), n2.clone())),
        (false, true) => return Some((Rat::one(), Rat::zero(), n1.clone())),
        _ => {}
    }
    let mu = n1.first_monomial().into_iter().chain(n2.first_monomial()).min()?;
    let alpha = n1.coeff(mu.x, mu.y);
    let beta = n2.coeff(mu.x, mu.y);
    if n1.scale(&beta) != n2.scale(&alpha) {
        return None;
    }
    let r2 = if !alpha.is_zero() {
        n1.scale(&(Rat::one() / &alpha))
    } else {
        n2.scale(&(Rat::one() / &beta))
    };
    Some((alpha, beta, r2))
}

/// `b·∂f/∂x − a·∂f/∂y ≡ 0`: `f` is constant along the level sets of `a·x + b·y`.
pub fn annihilates(a: &Rat, b: &Rat, f: &Poly2) -> bool {
    f.diff(Var::X).scale(b) == f.diff(Var::Y).scale(a)
}

/// Direction `(a, b)` (first nonzero entry `1`) such that `r₂` is a
/// polynomial in `a·x + b·y`, if one exists.
pub fn single_form_direction(r2: &Poly2) -> Option<(Rat, Rat)> {
    let dx = r2.diff(Var::X);
    let dy = r2.diff(Var::Y);
    let mu = dx.first_monomial().into_iter().chain(dy.first_monomial()).min()?;
    let (ca, cb) = (dx.coeff(mu.x, mu.y), dy.coeff(mu.x, mu.y));
    let lead = if !ca.is_zero() { ca.clone() } else { cb.clone() };
    let (a, b) = (&ca / &lead, &cb / &lead);
    annihilates(&a, &b, r2).then_some((a, b))
}

/// Recognises the normal form; on failure reports the first reason met.
pub fn decompose(map: &PolyMap) -> Result<NormalFormData, DecomposeFailure> {
    let (linear, n1, n2) = split_linear(map)?;
    let Some((alpha, beta, r2)) = proportional(&n1, &n2) else {
        return Err(DecomposeFailure {
            reason: FailureReason::NonProportional,
            detail: format!("quotient of nonlinear parts is non-constant: N1 = {n1}, N2 = {n2}"),
        });
    };
    if r2.is_zero() {
        return Ok(NormalFormData::linear_only(linear));
    }
    let not_single = || DecomposeFailure {
        reason: FailureReason::NotSingleLinearForm,
        detail: format!("common nonlinear factor {r2} is not a polynomial in a single linear form a*x + b*y"),
    };
    let (a, b) = single_form_direction(&r2).ok_or_else(not_single)?;
    let rho = r2.restrict_to_line(&a, &b).map_err(|_| not_single())?;
    let lc = rho.leading_coeff();
    let r = rho.monic();
    let p = r.shift_down(2).expect("nonlinear part has no terms below degree 2");
    Ok(NormalFormData {
        linear,
        a,
        b,
        alpha: &alpha * &lc,
        beta: &beta * &lc,
        p,
        r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapio::parse_map;
    use crate::ratpoly::{int, rat};

    fn poly(text: &str) -> Poly2 {
        crate::mapio::parse_poly(text, 64).unwrap()
    }

    #[test]
    fn split_linear_examples() {
        let m = parse_map("(x/2 + y^2, y/3 + y^3)").unwrap();
        let (b, n1, n2) = split_linear(&m).unwrap();
        assert_eq!(b, Mat2::diag(rat(1, 2), rat(1, 3)));
        assert_eq!((n1, n2), (poly("y^2"), poly("y^3")));

        let (b, n1, n2) = split_linear(&PolyMap::identity()).unwrap();
        assert_eq!(b, Mat2::identity());
        assert!(n1.is_zero() && n2.is_zero());

        let err = split_linear(&parse_map("(x + 1, y)").unwrap()).unwrap_err();
        assert_eq!(err.reason, FailureReason::OriginNotFixed);
    }

    #[test]
    fn proportional_examples() {
        assert_eq!(proportional(&poly("y^2"), &poly("y^3")), None);
        assert_eq!(
            proportional(&poly("(x+y)^2"), &poly("2*(x+y)^2")),
            Some((int(1), int(2), poly("(x+y)^2")))
        );
        assert_eq!(
            proportional(&poly("0"), &poly("x^2")),
            Some((int(0), int(1), poly("x^2")))
        );
        assert_eq!(
            proportional(&poly("x^2"), &poly("0")),
            Some((int(1), int(0), poly("x^2")))
        );
        // r2 normalised on the first monomial x^2
        assert_eq!(
            proportional(&poly("-3*x^2 + 6*y^3"), &poly("x^2 - 2*y^3")),
            Some((int(-3), int(1), poly("x^2 - 2*y^3")))
        );
    }

    #[test]
    fn single_form_examples() {
        assert_eq!(single_form_direction(&poly("(x+y)^2")), Some((int(1), int(1))));
        assert_eq!(single_form_direction(&poly("x^2 + y^2")), None);
        assert_eq!(single_form_direction(&poly("y^2")), Some((int(0), int(1))));
        assert_eq!(
            single_form_direction(&poly("(2*x - 6*y)^3 + (x - 3*y)^2")),
            Some((int(1), int(-3)))
        );
    }

    #[test]
    fn decompose_examples() {
        let err = decompose(&parse_map("(x/2 + y^2, y/3 + y^3)").unwrap()).unwrap_err();
        assert_eq!(err.reason, FailureReason::NonProportional);
        assert!(err.detail.contains("quotient of nonlinear parts is non-constant"));

        let err = decompose(&parse_map("(x/2 - y^3, y/2 + x^3)").unwrap()).unwrap_err();
        assert_eq!(err.reason, FailureReason::NonProportional);

        let nf = decompose(&parse_map("(x/2, y/3 + x^2)").unwrap()).unwrap();
        assert_eq!(nf.linear, Mat2::diag(rat(1, 2), rat(1, 3)));
        assert_eq!((nf.a.clone(), nf.b.clone()), (int(1), int(0)));
        assert_eq!((nf.alpha.clone(), nf.beta.clone()), (int(0), int(1)));
        assert_eq!(nf.r, Poly1::monomial(2, int(1)));
        assert_eq!(nf.p, Poly1::one());
    }

    #[test]
    fn decompose_not_single_form() {
        let err = decompose(&parse_map("(x + x^2 + y^2, y)").unwrap()).unwrap_err();
        assert_eq!(err.reason, FailureReason::NotSingleLinearForm);
    }

    #[test]
    fn decompose_linear_map() {
        let nf = decompose(&parse_map("(x/2 + y, -y)").unwrap()).unwrap();
        assert!(nf.is_linear());
        assert_eq!((nf.a.clone(), nf.b.clone()), (int(1), int(0)));
        assert!(nf.alpha.is_zero() && nf.beta.is_zero() && nf.p.is_zero());
    }

    #[test]
    fn monic_scale_folds_into_alpha_beta() {
        // -4(2x + 2y)^3 = -32 (x+y)^3
        let m = parse_map("(x/2 - 4*(2*x + 2*y)^3, y/3 + 8*(2*x + 2*y)^3)").unwrap();
        let nf = decompose(&m).unwrap();
        assert_eq!((nf.a.clone(), nf.b.clone()), (int(1), int(1)));
        assert_eq!(nf.r, Poly1::monomial(3, int(1)));
        assert_eq!((nf.alpha.clone(), nf.beta.clone()), (int(-32), int(64)));
        assert_eq!(reconstruct(&nf), m);
    }

    #[test]
    fn reconstruct_examples() {
        assert_eq!(
            reconstruct(&NormalFormData::linear_only(Mat2::identity())),
            PolyMap::identity()
        );
        let nf = NormalFormData {
            linear: Mat2::diag(rat(1, 2), rat(1, 3)),
            a: int(1),
            b: int(1),
            alpha: int(1),
            beta: int(2),
            p: Poly1::one(),
            r: Poly1::monomial(2, int(1)),
        };
        assert_eq!(reconstruct(&nf), parse_map("(x/2 + (x+y)^2, y/3 + 2*(x+y)^2)").unwrap());
    }

    #[test]
    fn normalized_matches_decompose() {
        let raw = NormalFormData::normalized(
            Mat2::diag(rat(1, 2), rat(1, 3)),
            int(2),
            int(-4),
            int(3),
            int(5),
            Poly1::from_terms([(0, int(1)), (1, rat(1, 7))]),
        )
        .unwrap();
        assert_eq!(decompose(&reconstruct(&raw)).unwrap(), raw);
    }
}
