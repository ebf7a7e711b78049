//! Decision engine for the discrete Markus-Yamabe hypotheses on planar
//! polynomial maps: fixed origin and every Jacobian eigenvalue strictly
//! inside the unit disk, everywhere in the plane.
//!
//! The pipeline is exact wherever the algebra allows it. A map is split
//! into linear and nonlinear parts, tested against the rank-one normal form
//! `B·(x, y)ᵀ + u²p(u)·(α, β)ᵀ` with `u = a·x + b·y`, and, when it fits,
//! decided globally by Sturm sequences on the trace and determinant of the
//! Jacobian as functions of `u`. Maps that do not fit fail structurally;
//! a numeric witness search supplies an explicit expanding point.

pub mod dynamics;
pub mod engine;
pub mod mapio;
pub mod normalform;
pub mod ratpoly;
pub mod spectra;
pub mod symmetry;
