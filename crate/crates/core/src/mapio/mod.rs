//! Text and JSON input/output for maps and analysis results.

mod json;
mod parser;
mod polymap;

use thiserror::Error;

pub use json::{from_json, poly1_json, poly2_json, rat_json, to_json, to_json_pretty, ToJson};
pub use parser::{parse_map, parse_map_with_cap, parse_poly};
pub use polymap::{format_map, PolyMap, DEFAULT_DEGREE_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("syntax error at offset {position}: found {found}, expected one of {}", expected.join(", "))]
    Syntax {
        position: usize,
        found: String,
        expected: Vec<&'static str>,
    },
    #[error("division by an expression containing a variable at offset {position}")]
    NonPolynomial { position: usize },
    #[error("division by zero at offset {position}")]
    DivisionByZero { position: usize },
    #[error("exponent at offset {position} is not a nonnegative integer literal")]
    NonIntegerExponent { position: usize },
    #[error("exponent at offset {position} is too large")]
    ExponentTooLarge { position: usize },
    #[error("degree {degree} exceeds the cap of {cap}{}", position.map(|p| format!(" (at offset {p})")).unwrap_or_default())]
    DegreeCapExceeded {
        degree: u32,
        cap: u32,
        position: Option<usize>,
    },
    #[error("malformed map JSON: {0}")]
    Schema(String),
}

impl MapError {
    /// Byte offset into the source text, when the error came from parsing.
    pub fn position(&self) -> Option<usize> {
        match self {
            MapError::Syntax { position, .. }
            | MapError::NonPolynomial { position }
            | MapError::DivisionByZero { position }
            | MapError::NonIntegerExponent { position }
            | MapError::ExponentTooLarge { position } => Some(*position),
            MapError::DegreeCapExceeded { position, .. } => *position,
            MapError::Schema(_) => None,
        }
    }
}
