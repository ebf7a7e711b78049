//! Stable JSON encodings.
//!
//! Rationals are strings (`"n"` or `"n/d"`), polynomial terms are
//! `[i, j, "c"]` triplets in graded-lex order, univariate terms `[k, "c"]`
//! in ascending order.

use serde_json::{json, Value};

use crate::dynamics::{BasinSummary, OrbitResult};
use crate::engine::{point_on_line, Certificate, Verdict};
use crate::normalform::{DecomposeFailure, NormalFormData};
use crate::ratpoly::{format_rat, parse_rat, Mat2, Monomial, Poly1, Poly2, Rat};
use crate::spectra::{DiskTest, UnivariateSpectral, Witness, JURY_LABELS};
use crate::symmetry::{GroupMatrix, ReflectionAxes, RotationOrder, SymmetryGroup};

use super::{MapError, PolyMap};

pub trait ToJson {
    fn to_json_value(&self) -> Value;
}

pub fn to_json<T: ToJson + ?Sized>(value: &T) -> String {
    value.to_json_value().to_string()
}

pub fn to_json_pretty<T: ToJson + ?Sized>(value: &T) -> String {
    serde_json::to_string_pretty(&value.to_json_value()).expect("values are serializable")
}

pub fn rat_json(r: &Rat) -> Value {
    Value::String(format_rat(r))
}

pub fn poly2_json(p: &Poly2) -> Value {
    Value::Array(p.terms().map(|(m, c)| json!([m.x, m.y, format_rat(c)])).collect())
}

pub fn poly1_json(p: &Poly1) -> Value {
    Value::Array(p.terms().map(|(k, c)| json!([k, format_rat(c)])).collect())
}

fn mat_json(m: &Mat2) -> Value {
    json!([
        [format_rat(m.get(0, 0)), format_rat(m.get(0, 1))],
        [format_rat(m.get(1, 0)), format_rat(m.get(1, 1))]
    ])
}

impl ToJson for PolyMap {
    fn to_json_value(&self) -> Value {
        json!({ "f1": poly2_json(&self.f1), "f2": poly2_json(&self.f2) })
    }
}

impl ToJson for NormalFormData {
    fn to_json_value(&self) -> Value {
        json!({
            "B": mat_json(&self.linear),
            "a": rat_json(&self.a),
            "b": rat_json(&self.b),
            "alpha": rat_json(&self.alpha),
            "beta": rat_json(&self.beta),
            "p": poly1_json(&self.p),
        })
    }
}

impl ToJson for DecomposeFailure {
    fn to_json_value(&self) -> Value {
        json!({ "reason": self.reason.as_str(), "detail": self.detail })
    }
}

impl ToJson for GroupMatrix {
    fn to_json_value(&self) -> Value {
        match self {
            GroupMatrix::Exact(m) => mat_json(m),
            GroupMatrix::Float(m) => json!(m),
        }
    }
}

impl ToJson for SymmetryGroup {
    fn to_json_value(&self) -> Value {
        let n = match self.rotation_order {
            RotationOrder::Finite(n) => json!(n),
            RotationOrder::Continuous => Value::Null,
        };
        let axes = match &self.reflection_axes {
            ReflectionAxes::All => json!("all"),
            ReflectionAxes::Finite(v) => json!(v),
        };
        json!({
            "classification": self.classification.key(),
            "name": self.classification.to_string(),
            "n": n,
            "reflection_axis": self.reflection_axis_angle,
            "reflection_axes": axes,
            "generators": self.generators.iter().map(ToJson::to_json_value).collect::<Vec<_>>(),
        })
    }
}

impl ToJson for Witness {
    fn to_json_value(&self) -> Value {
        json!({
            "point": [self.point.0, self.point.1],
            "spectral_radius": self.spectral_radius,
            "certified": self.certified,
        })
    }
}

impl ToJson for DiskTest {
    fn to_json_value(&self) -> Value {
        json!({ "inside": self.inside, "trace": rat_json(&self.trace), "det": rat_json(&self.det) })
    }
}

fn spectral_json(us: &UnivariateSpectral) -> Value {
    json!({ "t": poly1_json(&us.t), "d": poly1_json(&us.d) })
}

impl ToJson for Certificate {
    fn to_json_value(&self) -> Value {
        let mut v = match self {
            Certificate::NormalFormPositive {
                normal_form,
                spectral,
                positive,
            } => json!({
                "normal_form": normal_form.to_json_value(),
                "spectral": spectral_json(spectral),
                "positive_polynomials": JURY_LABELS
                    .iter()
                    .zip(positive)
                    .map(|(label, q)| json!({ "label": label, "poly": poly1_json(q) }))
                    .collect::<Vec<_>>(),
            }),
            Certificate::OriginNotFixed { image_of_origin } => json!({
                "image_of_origin": [rat_json(&image_of_origin[0]), rat_json(&image_of_origin[1])],
            }),
            Certificate::NonProportional { detail } | Certificate::NotSingleLinearForm { detail } => {
                json!({ "detail": detail })
            }
            Certificate::UnivariateRootFailure {
                normal_form,
                spectral,
                which,
                polynomial,
                u_star,
                interval,
                boundary_only,
            } => json!({
                "normal_form": normal_form.to_json_value(),
                "spectral": spectral_json(spectral),
                "polynomial_label": JURY_LABELS[*which],
                "polynomial": poly1_json(polynomial),
                "u_star": u_star.as_ref().map(rat_json),
                "point": u_star.as_ref().map(|u| {
                    let (x, y) = point_on_line(&normal_form.a, &normal_form.b, u);
                    json!([rat_json(&x), rat_json(&y)])
                }),
                "interval": interval.as_ref().map(|iv| json!([rat_json(&iv.lo), rat_json(&iv.hi)])),
                "boundary_only": boundary_only,
            }),
            Certificate::SymmetryObstruction {
                group,
                structural,
                detail,
            } => json!({
                "group": group.to_json_value(),
                "structural": structural.as_str(),
                "detail": detail,
            }),
            Certificate::NumericWitness { witness } => json!({ "witness": witness.to_json_value() }),
        };
        v.as_object_mut()
            .expect("certificate encodes as an object")
            .insert("kind".into(), json!(self.kind()));
        v
    }
}

impl ToJson for Verdict {
    fn to_json_value(&self) -> Value {
        json!({
            "map": self.map.to_string(),
            "status": self.status.as_str(),
            "certificate": self.certificate.to_json_value(),
            "witness": self.witness.to_json_value(),
            "symmetry": self.symmetry.to_json_value(),
            "notes": self.notes,
        })
    }
}

impl ToJson for OrbitResult {
    fn to_json_value(&self) -> Value {
        json!({
            "outcome": self.outcome.name(),
            "steps": self.outcome.steps(),
            "final_point": [self.final_point.0, self.final_point.1],
            "final_norm": self.final_norm,
            "note": self.note,
        })
    }
}

impl ToJson for BasinSummary {
    fn to_json_value(&self) -> Value {
        json!({
            "grid": {
                "extent": self.grid.extent,
                "step": self.grid.step,
                "points_per_axis": self.grid.points_per_axis(),
            },
            "total": self.total(),
            "counts": {
                "Converged": self.converged,
                "Escaped": self.escaped,
                "Undecided": self.undecided,
            },
            "worst_steps": self.worst_steps,
            "exceptions": self.exceptions.iter().map(|e| json!({
                "x0": [e.start.0, e.start.1],
                "outcome": e.outcome.name(),
                "steps": e.outcome.steps(),
            })).collect::<Vec<_>>(),
        })
    }
}

impl<T: ToJson> ToJson for Option<T> {
    fn to_json_value(&self) -> Value {
        self.as_ref().map(ToJson::to_json_value).unwrap_or(Value::Null)
    }
}

fn schema(msg: impl Into<String>) -> MapError {
    MapError::Schema(msg.into())
}

fn poly_from_json(v: &Value, field: &str) -> Result<Poly2, MapError> {
    let items = v
        .as_array()
        .ok_or_else(|| schema(format!("\"{field}\" must be an array of [i, j, \"coeff\"]")))?;
    let mut terms: Vec<(Monomial, Rat)> = Vec::with_capacity(items.len());
    for (k, item) in items.iter().enumerate() {
        let bad = || schema(format!("\"{field}\"[{k}] must be [i, j, \"num/den\"]"));
        let triple = item.as_array().filter(|a| a.len() == 3).ok_or_else(bad)?;
        let exp = |v: &Value| v.as_u64().and_then(|e| u32::try_from(e).ok());
        let (i, j) = (exp(&triple[0]).ok_or_else(bad)?, exp(&triple[1]).ok_or_else(bad)?);
        let c = triple[2].as_str().and_then(parse_rat).ok_or_else(bad)?;
        let m = Monomial::new(i, j);
        if terms.iter().any(|(seen, _)| *seen == m) {
            return Err(schema(format!("\"{field}\" repeats exponent [{i}, {j}]")));
        }
        terms.push((m, c));
    }
    Ok(Poly2::from_terms(terms))
}

/// Reads `{"f1": [[i, j, "c"], ...], "f2": [...]}`; the degree cap applies.
pub fn from_json(text: &str) -> Result<PolyMap, MapError> {
    let v: Value = serde_json::from_str(text).map_err(|e| schema(e.to_string()))?;
    let obj = v.as_object().ok_or_else(|| schema("top level must be an object"))?;
    if let Some(extra) = obj.keys().find(|k| *k != "f1" && *k != "f2") {
        return Err(schema(format!("unexpected field \"{extra}\"")));
    }
    let get = |f: &str| obj.get(f).ok_or_else(|| schema(format!("missing field \"{f}\"")));
    let f1 = poly_from_json(get("f1")?, "f1")?;
    let f2 = poly_from_json(get("f2")?, "f2")?;
    PolyMap::new(f1, f2)
}
