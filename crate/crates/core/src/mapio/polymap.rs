use std::fmt;

use crate::ratpoly::{ComplexCoeffs, Mat2, Poly2, Rat};

use super::MapError;

pub const DEFAULT_DEGREE_CAP: u32 = 64;

/// A planar polynomial map `F = (f1, f2)`.
#[derive(Clone)]
pub struct PolyMap {
    pub f1: Poly2,
    pub f2: Poly2,
    pub source_text: Option<String>,
}

impl PolyMap {
    /// Builds a map, enforcing the default degree cap.
    pub fn new(f1: Poly2, f2: Poly2) -> Result<Self, MapError> {
        Self::with_cap(f1, f2, DEFAULT_DEGREE_CAP)
    }

    pub fn with_cap(f1: Poly2, f2: Poly2, cap: u32) -> Result<Self, MapError> {
        let degree = f1.degree().max(f2.degree());
        if degree > cap as i64 {
            return Err(MapError::DegreeCapExceeded {
                degree: degree as u32,
                cap,
                position: None,
            });
        }
        Ok(PolyMap {
            f1,
            f2,
            source_text: None,
        })
    }

    /// Unchecked construction for internally generated maps whose degree
    /// is already bounded by their inputs.
    pub fn from_parts(f1: Poly2, f2: Poly2) -> Self {
        PolyMap {
            f1,
            f2,
            source_text: None,
        }
    }

    pub fn identity() -> Self {
        Self::from_parts(Poly2::x(), Poly2::y())
    }

    pub fn zero() -> Self {
        Self::from_parts(Poly2::zero(), Poly2::zero())
    }

    pub fn components(&self) -> [&Poly2; 2] {
        [&self.f1, &self.f2]
    }

    pub fn degree(&self) -> i64 {
        self.f1.degree().max(self.f2.degree())
    }

    /// `F(0, 0) = (0, 0)`.
    pub fn fixes_origin(&self) -> bool {
        use num_traits::Zero;
        self.f1.constant_term().is_zero() && self.f2.constant_term().is_zero()
    }

    pub fn is_linear(&self) -> bool {
        self.degree() <= 1 && self.fixes_origin()
    }

    pub fn is_zero(&self) -> bool {
        self.f1.is_zero() && self.f2.is_zero()
    }

    pub fn to_complex(&self) -> ComplexCoeffs {
        ComplexCoeffs::from_real_pair(&self.f1, &self.f2)
    }

    pub fn from_complex(cc: &ComplexCoeffs) -> Self {
        let (f1, f2) = cc.to_real_pair();
        Self::from_parts(f1, f2)
    }

    pub fn eval(&self, x: &Rat, y: &Rat) -> [Rat; 2] {
        [self.f1.eval(x, y), self.f2.eval(x, y)]
    }

    /// `F ∘ M`, i.e. `(x, y) ↦ F(M·(x, y)ᵀ)`.
    pub fn compose_linear(&self, m: &Mat2) -> PolyMap {
        Self::from_parts(self.f1.subst_linear(m, None), self.f2.subst_linear(m, None))
    }

    /// `M ∘ F`.
    pub fn apply_linear(&self, m: &Mat2) -> PolyMap {
        let f1 = &self.f1.scale(m.get(0, 0)) + &self.f2.scale(m.get(0, 1));
        let f2 = &self.f1.scale(m.get(1, 0)) + &self.f2.scale(m.get(1, 1));
        Self::from_parts(f1, f2)
    }

    /// Conjugate `P⁻¹ ∘ F ∘ P`; `None` when `P` is singular.
    pub fn conjugate(&self, p: &Mat2) -> Option<PolyMap> {
        let inv = p.inverse()?;
        Some(self.compose_linear(p).apply_linear(&inv))
    }
}

impl PartialEq for PolyMap {
    fn eq(&self, other: &Self) -> bool {
        self.f1 == other.f1 && self.f2 == other.f2
    }
}

impl Eq for PolyMap {}

impl fmt::Debug for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Canonical `(f1, f2)` text that [`super::parse_map`] reads back exactly.
impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.f1, self.f2)
    }
}

pub fn format_map(map: &PolyMap) -> String {
    map.to_string()
}
