//! Single-verdict analysis: structure first, then exact spectra, with the
//! symmetry group attached to every answer.
//!
//! Every failing verdict carries a certificate that [`recheck`] can verify
//! without trusting the code path that produced it.

use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::mapio::{format_map, PolyMap};
use crate::normalform::{decompose, FailureReason, NormalFormData};
use crate::ratpoly::{format_rat, to_f64, Mat2, Poly1, Poly2, Rat};
use crate::spectra::{
    disk_test_at, jacobian, jury_inside_closed, nearest_rational_point, non_positivity, roots_between, sturm_positive,
    sturm_sequence, univariate_reduce, witness_search, NonPositivity, RootInterval, SearchConfig, UnivariateSpectral,
    Witness, JURY_LABELS,
};
use crate::symmetry::{classify, GroupMatrix, RotationOrder, SymmetryGroup};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Status {
    HypothesesHold,
    HypothesesFail,
    /// Only produced by a witness-only search that found nothing.
    Undecided,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::HypothesesHold => "HypothesesHold",
            Status::HypothesesFail => "HypothesesFail",
            Status::Undecided => "Undecided",
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub enum Certificate {
    /// The three Jury polynomials in `u` are positive on all of ℝ.
    NormalFormPositive {
        normal_form: NormalFormData,
        spectral: UnivariateSpectral,
        positive: [Poly1; 3],
    },
    OriginNotFixed {
        image_of_origin: [Rat; 2],
    },
    NonProportional {
        detail: String,
    },
    NotSingleLinearForm {
        detail: String,
    },
    /// One Jury polynomial fails to be positive.
    UnivariateRootFailure {
        normal_form: NormalFormData,
        spectral: UnivariateSpectral,
        /// Index into [`JURY_LABELS`].
        which: usize,
        polynomial: Poly1,
        /// A rational `u` where the polynomial is `≤ 0`, if one is known.
        u_star: Option<Rat>,
        /// Isolating interval of a root, for boundary-only failures.
        interval: Option<RootInterval>,
        /// The polynomial is `≥ 0` everywhere and only touches zero.
        boundary_only: bool,
    },
    /// Nonlinear map with a symmetry group other than the trivial group or
    /// a `Z2`; carries the structural reason found alongside.
    SymmetryObstruction {
        group: SymmetryGroup,
        structural: FailureReason,
        detail: String,
    },
    NumericWitness {
        witness: Witness,
    },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::NormalFormPositive { .. } => "NormalFormPositive",
            Certificate::OriginNotFixed { .. } => "OriginNotFixed",
            Certificate::NonProportional { .. } => "NonProportional",
            Certificate::NotSingleLinearForm { .. } => "NotSingleLinearForm",
            Certificate::UnivariateRootFailure { .. } => "UnivariateRootFailure",
            Certificate::SymmetryObstruction { .. } => "SymmetryObstruction",
            Certificate::NumericWitness { .. } => "NumericWitness",
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct Verdict {
    pub map: PolyMap,
    pub status: Status,
    pub certificate: Certificate,
    /// Supplementary numeric evidence for structural failures.
    pub witness: Option<Witness>,
    pub symmetry: SymmetryGroup,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalyzeConfig {
    pub search: SearchConfig,
    pub tol: f64,
    /// Run the witness search on structural failures.
    pub attach_witness: bool,
}

impl Default for AnalyzeConfig {
    fn default() -> Self {
        AnalyzeConfig {
            search: SearchConfig::default(),
            tol: crate::symmetry::DEFAULT_TOL,
            attach_witness: true,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    /// A combination the theory rules out; always a bug.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

/// A point on the line `a·x + b·y = u` (`(a, b)` has first nonzero entry 1).
pub fn point_on_line(a: &Rat, b: &Rat, u: &Rat) -> (Rat, Rat) {
    if !a.is_zero() {
        (u / a, Rat::zero())
    } else {
        (Rat::zero(), u / b)
    }
}

fn failing_jury(nf: &NormalFormData, us: UnivariateSpectral) -> Certificate {
    let polys = us.jury_polynomials();
    let mut touching = None;
    for (which, q) in polys.iter().enumerate() {
        match non_positivity(q) {
            None => {}
            Some(NonPositivity::Negative(u)) => {
                return Certificate::UnivariateRootFailure {
                    normal_form: nf.clone(),
                    spectral: us.clone(),
                    which,
                    polynomial: q.clone(),
                    u_star: Some(u),
                    interval: None,
                    boundary_only: false,
                };
            }
            Some(NonPositivity::Touches { interval, exact }) => {
                touching.get_or_insert((which, interval, exact));
            }
        }
    }
    let (which, interval, exact) = touching.expect("called only when some Jury polynomial is not positive");
    Certificate::UnivariateRootFailure {
        normal_form: nf.clone(),
        polynomial: polys[which].clone(),
        spectral: us,
        which,
        u_star: exact,
        interval: Some(interval),
        boundary_only: true,
    }
}

/// Decides the hypotheses for `map`.
///
/// Structural failures are final: a map outside the rank-one normal form
/// always has an expanding point somewhere, so the verdict is
/// `HypothesesFail` whether or not the numeric search locates it.
pub fn analyze(map: &PolyMap, cfg: &AnalyzeConfig) -> Result<Verdict, EngineError> {
    let symmetry = classify(map, cfg.tol);
    let mut notes = Vec::new();
    let nonlinear = !map.is_linear();
    let (status, certificate, witness) = match decompose(map) {
        Ok(nf) => {
            let us = univariate_reduce(&nf);
            let polys = us.jury_polynomials();
            if polys.iter().all(sturm_positive) {
                let cert = Certificate::NormalFormPositive {
                    normal_form: nf,
                    spectral: us,
                    positive: polys,
                };
                (Status::HypothesesHold, cert, None)
            } else {
                let cert = failing_jury(&nf, us);
                if let Certificate::UnivariateRootFailure {
                    boundary_only: true,
                    which,
                    ..
                } = &cert
                {
                    notes.push(format!(
                        "boundary-only failure: all three Jury polynomials are nonnegative, \
                         {} vanishes at a real root (an eigenvalue of modulus exactly one)",
                        JURY_LABELS[*which]
                    ));
                }
                (Status::HypothesesFail, cert, None)
            }
        }
        Err(failure) => {
            let cert = match failure.reason {
                FailureReason::OriginNotFixed => Certificate::OriginNotFixed {
                    image_of_origin: [map.f1.constant_term(), map.f2.constant_term()],
                },
                reason if nonlinear && !symmetry.classification.is_trivial() && !symmetry.classification.is_z2() => {
                    Certificate::SymmetryObstruction {
                        group: symmetry.clone(),
                        structural: reason,
                        detail: failure.detail,
                    }
                }
                FailureReason::NonProportional => Certificate::NonProportional { detail: failure.detail },
                FailureReason::NotSingleLinearForm => Certificate::NotSingleLinearForm { detail: failure.detail },
            };
            let witness = if cfg.attach_witness {
                let w = witness_search(map, &cfg.search);
                if w.is_none() {
                    notes.push(format!(
                        "witness search exhausted its budget (extent up to {}); the structural certificate stands",
                        cfg.search.max_extent
                    ));
                }
                w
            } else {
                None
            };
            (Status::HypothesesFail, cert, witness)
        }
    };
    let verdict = Verdict {
        map: map.clone(),
        status,
        certificate,
        witness,
        symmetry,
        notes,
    };
    check_consistency(&verdict, cfg.tol)?;
    Ok(verdict)
}

fn inconsistency(msg: String) -> EngineError {
    EngineError::InternalInconsistency(msg)
}

/// Matrix `B` commutes with `γ` (exactly, or within `tol` for float `γ`).
fn commutes(b: &Mat2, gamma: &GroupMatrix, tol: f64) -> bool {
    match gamma {
        GroupMatrix::Exact(g) => b.mul(g) == g.mul(b),
        GroupMatrix::Float(g) => {
            let bf = b.to_f64();
            let scale = bf.iter().flatten().fold(1.0f64, |m, v| m.max(v.abs()));
            (0..2).all(|i| {
                (0..2).all(|j| {
                    let bg: f64 = (0..2).map(|k| bf[i][k] * g[k][j]).sum();
                    let gb: f64 = (0..2).map(|k| g[i][k] * bf[k][j]).sum();
                    (bg - gb).abs() <= tol * scale
                })
            })
        }
    }
}

/// `γ·v = s·v` for a reflection `γ` and `s = ±1`.
fn eigen_with_sign(gamma: &GroupMatrix, v: [&Rat; 2], sign: f64, tol: f64) -> bool {
    match gamma {
        GroupMatrix::Exact(g) => {
            let gv = g.mul_vec(&[v[0].clone(), v[1].clone()]);
            let s = Rat::from_integer((sign as i64).into());
            gv[0] == v[0] * &s && gv[1] == v[1] * &s
        }
        GroupMatrix::Float(g) => {
            let (x, y) = (to_f64(v[0]), to_f64(v[1]));
            let scale = x.abs().max(y.abs()).max(1.0);
            (g[0][0] * x + g[0][1] * y - sign * x).abs() <= tol * scale
                && (g[1][0] * x + g[1][1] * y - sign * y).abs() <= tol * scale
        }
    }
}

fn is_even(r: &Poly1) -> bool {
    r.terms().all(|(k, _)| k % 2 == 0)
}

/// Checks the verdict against the symmetry results the theory guarantees.
fn check_consistency(v: &Verdict, tol: f64) -> Result<(), EngineError> {
    let class = v.symmetry.classification;
    if let Certificate::NormalFormPositive { normal_form: nf, .. } = &v.certificate {
        if v.status != Status::HypothesesHold {
            return Err(inconsistency("positive certificate without HypothesesHold".into()));
        }
        if !nf.is_linear() {
            if !(class.is_trivial() || class.is_z2()) {
                return Err(inconsistency(format!(
                    "nonlinear map satisfies the hypotheses yet has symmetry group {class}"
                )));
            }
            // With a reflection σ the hypotheses force B·σ = σ·B, (α, β) on
            // the axis, (a, b) normal to it and r even.
            if let (Some(phi), true) = (v.symmetry.reflection_axis_angle, v.symmetry.has_reflection) {
                let sigma = GroupMatrix::reflection(phi);
                let ok = commutes(&nf.linear, &sigma, tol)
                    && eigen_with_sign(&sigma, [&nf.alpha, &nf.beta], 1.0, tol)
                    && eigen_with_sign(&sigma, [&nf.a, &nf.b], -1.0, tol)
                    && is_even(&nf.r);
                if !ok {
                    return Err(inconsistency(format!(
                        "reflection-equivariant map satisfies the hypotheses outside the reflection normal form (axis {phi})"
                    )));
                }
            }
        }
    } else if v.status == Status::HypothesesHold {
        return Err(inconsistency("HypothesesHold without a positive certificate".into()));
    }
    if v.map.is_linear() && v.map.fixes_origin() && !v.map.is_zero() {
        let rotational = matches!(v.symmetry.rotation_order, RotationOrder::Continuous)
            || matches!(v.symmetry.rotation_order, RotationOrder::Finite(n) if n >= 3);
        if rotational {
            let b = Mat2::new(
                v.map.f1.coeff(1, 0),
                v.map.f1.coeff(0, 1),
                v.map.f2.coeff(1, 0),
                v.map.f2.coeff(0, 1),
            );
            if b.get(0, 0) != b.get(1, 1) || b.get(0, 1) != &-b.get(1, 0) {
                return Err(inconsistency(format!(
                    "linear map with rotational symmetry {class} is not a scaled rotation"
                )));
            }
        }
    }
    Ok(())
}

/// Witness-only analysis: a certified witness proves failure; anything
/// else is `Undecided`.
pub fn witness_verdict(map: &PolyMap, cfg: &AnalyzeConfig) -> Verdict {
    let symmetry = classify(map, cfg.tol);
    let found = witness_search(map, &cfg.search);
    let mut notes = Vec::new();
    let (status, witness) = match found {
        Some(w) if w.certified => (Status::HypothesesFail, w),
        Some(w) => {
            notes.push("witness found in floating point but not confirmed at the nearby rational point".into());
            (Status::Undecided, w)
        }
        None => {
            notes.push(format!("no witness within extent {}", cfg.search.max_extent));
            let w = Witness {
                point: (0.0, 0.0),
                spectral_radius: jacobian(map).to_f64().spectral_radius(0.0, 0.0),
                certified: false,
            };
            (Status::Undecided, w)
        }
    };
    Verdict {
        map: map.clone(),
        status,
        certificate: Certificate::NumericWitness {
            witness: witness.clone(),
        },
        witness: Some(witness),
        symmetry,
        notes,
    }
}

fn recheck_witness(map: &PolyMap, w: &Witness) -> Result<(), String> {
    let (x, y) = nearest_rational_point(w.point).ok_or("witness point is not finite")?;
    let (t, d) = jacobian(map).trace_det_at(&x, &y);
    if jury_inside_closed(&t, &d) {
        return Err(format!(
            "at ({}, {}) the spectrum lies in the closed unit disk (trace {}, det {})",
            format_rat(&x),
            format_rat(&y),
            format_rat(&t),
            format_rat(&d)
        ));
    }
    Ok(())
}

/// Re-verifies a verdict's certificate from the map alone.
pub fn recheck(v: &Verdict) -> Result<(), String> {
    let map = &v.map;
    let structural = |reason: FailureReason| match decompose(map) {
        Err(f) if f.reason == reason => Ok(()),
        Err(f) => Err(format!("decompose reports {} instead of {reason}", f.reason)),
        Ok(_) => Err(format!("map decomposes; expected {reason}")),
    };
    match &v.certificate {
        Certificate::NormalFormPositive {
            normal_form,
            spectral,
            positive,
        } => {
            if crate::normalform::reconstruct(normal_form) != *map {
                return Err("normal form does not reconstruct the map".into());
            }
            let us = univariate_reduce(normal_form);
            if &us != spectral || &us.jury_polynomials() != positive {
                return Err("trace/determinant polynomials do not match".into());
            }
            if let Some(k) = positive.iter().position(|q| !sturm_positive(q)) {
                return Err(format!("{} is not positive", JURY_LABELS[k]));
            }
        }
        Certificate::OriginNotFixed { image_of_origin } => {
            let origin = map.eval(&Rat::zero(), &Rat::zero());
            if &origin != image_of_origin || origin.iter().all(Zero::is_zero) {
                return Err("the origin is fixed".into());
            }
        }
        Certificate::NonProportional { .. } => structural(FailureReason::NonProportional)?,
        Certificate::NotSingleLinearForm { .. } => structural(FailureReason::NotSingleLinearForm)?,
        Certificate::SymmetryObstruction {
            group,
            structural: reason,
            ..
        } => {
            structural(*reason)?;
            let again = classify(map, crate::symmetry::DEFAULT_TOL);
            if again.classification != group.classification {
                return Err(format!("group re-classifies as {}", again.classification));
            }
            if map.is_linear() || group.classification.is_trivial() || group.classification.is_z2() {
                return Err("symmetry obstruction needs a nonlinear map and a group other than Z2".into());
            }
        }
        Certificate::UnivariateRootFailure {
            normal_form,
            which,
            polynomial,
            u_star,
            interval,
            ..
        } => {
            if crate::normalform::reconstruct(normal_form) != *map {
                return Err("normal form does not reconstruct the map".into());
            }
            let polys = univariate_reduce(normal_form).jury_polynomials();
            if polys.get(*which) != Some(polynomial) {
                return Err("failing polynomial does not match".into());
            }
            match (u_star, interval) {
                (Some(u), _) => {
                    let (x, y) = point_on_line(&normal_form.a, &normal_form.b, u);
                    if polynomial.eval(u).is_positive() || disk_test_at(&jacobian(map), &x, &y).inside {
                        return Err(format!("disk test passes on the line u = {}", format_rat(u)));
                    }
                }
                (None, Some(iv)) => {
                    let sqf = polynomial.squarefree();
                    if roots_between(&sturm_sequence(&sqf), &iv.lo, &iv.hi) != 1 {
                        return Err("interval does not isolate a root".into());
                    }
                }
                (None, None) => return Err("no failure location".into()),
            }
        }
        Certificate::NumericWitness { witness } => {
            if v.status == Status::HypothesesFail {
                recheck_witness(map, witness)?;
            }
        }
    }
    if let Some(w) = &v.witness {
        if w.certified {
            recheck_witness(map, w)?;
        }
    }
    Ok(())
}

fn point_arg(x: &Rat, y: &Rat) -> String {
    format!("{},{}", format_rat(x), format_rat(y))
}

/// Human-readable report with re-check commands.
pub fn explain(v: &Verdict) -> String {
    let mut out = String::new();
    let map_text = format_map(&v.map);
    let _ = writeln!(out, "map: {map_text}");
    let _ = writeln!(out, "status: {}", v.status.as_str());
    let _ = writeln!(out, "certificate: {}", v.certificate.kind());
    match &v.certificate {
        Certificate::NormalFormPositive {
            normal_form: nf,
            spectral,
            positive,
        } => {
            let _ = writeln!(
                out,
                "  normal form: B = {:?}, u = {}, (alpha, beta) = ({}, {}), r(u) = {}",
                nf.linear,
                Poly2::linear(&nf.a, &nf.b),
                format_rat(&nf.alpha),
                format_rat(&nf.beta),
                nf.r
            );
            let _ = writeln!(out, "  trace t(u) = {}, det d(u) = {}", spectral.t, spectral.d);
            let _ = writeln!(out, "  positive on the whole line (Sturm count of real roots is zero):");
            for (label, q) in JURY_LABELS.iter().zip(positive) {
                let _ = writeln!(out, "    {label} = {q}");
            }
        }
        Certificate::OriginNotFixed { image_of_origin } => {
            let _ = writeln!(
                out,
                "  F(0, 0) = ({}, {}), so the origin is not a fixed point",
                format_rat(&image_of_origin[0]),
                format_rat(&image_of_origin[1])
            );
        }
        Certificate::NonProportional { detail } | Certificate::NotSingleLinearForm { detail } => {
            let _ = writeln!(out, "  {detail}");
            let _ = writeln!(
                out,
                "  a map outside the rank-one normal form has a Jacobian eigenvalue outside the unit disk somewhere"
            );
        }
        Certificate::SymmetryObstruction {
            group,
            structural,
            detail,
        } => {
            let _ = writeln!(
                out,
                "  nonlinear map with symmetry group {}; only the trivial group or Z2 is compatible with the hypotheses",
                group.classification
            );
            let _ = writeln!(out, "  structural reason: {structural}: {detail}");
        }
        Certificate::UnivariateRootFailure {
            normal_form: nf,
            spectral,
            which,
            polynomial,
            u_star,
            interval,
            boundary_only,
        } => {
            let _ = writeln!(out, "  trace t(u) = {}, det d(u) = {}", spectral.t, spectral.d);
            let _ = writeln!(out, "  {} = {} is not positive", JURY_LABELS[*which], polynomial);
            if let Some(u) = u_star {
                let (x, y) = point_on_line(&nf.a, &nf.b, u);
                let _ = writeln!(
                    out,
                    "  fails at u* = {} (e.g. the point ({}, {}))",
                    format_rat(u),
                    format_rat(&x),
                    format_rat(&y)
                );
            } else if let Some(iv) = interval {
                let _ = writeln!(
                    out,
                    "  vanishes at an irrational root in ({}, {})",
                    format_rat(&iv.lo),
                    format_rat(&iv.hi)
                );
            }
            if *boundary_only {
                let _ = writeln!(out, "  boundary-only: an eigenvalue reaches modulus exactly one");
            }
        }
        Certificate::NumericWitness { witness } => {
            let _ = writeln!(
                out,
                "  spectral radius {} at ({}, {}), certified: {}",
                witness.spectral_radius, witness.point.0, witness.point.1, witness.certified
            );
        }
    }
    if let (Some(w), false) = (&v.witness, matches!(v.certificate, Certificate::NumericWitness { .. })) {
        let _ = writeln!(
            out,
            "witness: spectral radius {} at ({}, {}), certified: {}",
            w.spectral_radius, w.point.0, w.point.1, w.certified
        );
    }
    let _ = writeln!(out, "symmetry: {}", v.symmetry.describe());
    for note in &v.notes {
        let _ = writeln!(out, "note: {note}");
    }
    let _ = writeln!(out, "re-check:");
    let quoted = format!("\"{map_text}\"");
    match &v.certificate {
        Certificate::NormalFormPositive { .. }
        | Certificate::NonProportional { .. }
        | Certificate::NotSingleLinearForm { .. }
        | Certificate::OriginNotFixed { .. } => {
            let _ = writeln!(out, "  dmy normal-form {quoted}");
        }
        Certificate::SymmetryObstruction { .. } => {
            let _ = writeln!(out, "  dmy symmetry {quoted}");
            let _ = writeln!(out, "  dmy normal-form {quoted}");
        }
        Certificate::UnivariateRootFailure {
            normal_form: nf,
            u_star: Some(u),
            ..
        } => {
            let (x, y) = point_on_line(&nf.a, &nf.b, u);
            let _ = writeln!(out, "  dmy jury {quoted} --point {}", point_arg(&x, &y));
        }
        Certificate::UnivariateRootFailure { .. } | Certificate::NumericWitness { .. } => {
            let _ = writeln!(out, "  dmy normal-form {quoted}");
        }
    }
    if let Some(w) = &v.witness {
        if let Some((x, y)) = nearest_rational_point(w.point) {
            let _ = writeln!(out, "  dmy jury {quoted} --point {}", point_arg(&x, &y));
        }
    }
    out
}
