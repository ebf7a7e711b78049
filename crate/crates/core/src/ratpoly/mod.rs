//! Exact polynomial arithmetic in one and two variables over the rationals.

mod complex;
mod mat;
mod poly1;
mod poly2;
mod rat;

pub use complex::{ComplexCoeffs, GaussRat};
pub use mat::Mat2;
pub use poly1::Poly1;
pub use poly2::{Monomial, Poly2, Poly2F, PolyError, Var};
pub use rat::{format_rat, int, nearest_dyadic, parse_rat, rat, to_f64, Rat};
