//! Float iteration of `x_{k+1} = F(x_k)` and grid scans of the basin of
//! the origin. Evidence only; nothing here certifies attraction.

use rayon::prelude::*;
use thiserror::Error;

use crate::mapio::PolyMap;
use crate::ratpoly::Poly2F;

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitConfig {
    pub max_iter: u64,
    pub conv_tol: f64,
    pub escape_radius: f64,
}

impl Default for OrbitConfig {
    fn default() -> Self {
        OrbitConfig {
            max_iter: 100_000,
            conv_tol: 1e-9,
            escape_radius: 1e6,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DynamicsError {
    #[error("invalid orbit configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

impl OrbitConfig {
    pub fn validate(&self) -> Result<(), DynamicsError> {
        let bad = |m: &str| Err(DynamicsError::InvalidConfig(m.into()));
        if self.max_iter == 0 {
            return bad("max_iter must be positive");
        }
        if !(self.conv_tol > 0.0 && self.escape_radius.is_finite()) {
            return bad("conv_tol must be positive and escape_radius finite");
        }
        if self.conv_tol >= self.escape_radius {
            return bad("conv_tol must be smaller than escape_radius");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Converged(u64),
    Escaped(u64),
    Undecided,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::Converged(_) => "Converged",
            Outcome::Escaped(_) => "Escaped",
            Outcome::Undecided => "Undecided",
        }
    }

    pub fn steps(self) -> Option<u64> {
        match self {
            Outcome::Converged(n) | Outcome::Escaped(n) => Some(n),
            Outcome::Undecided => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitResult {
    pub outcome: Outcome,
    pub final_point: (f64, f64),
    pub final_norm: f64,
    /// Set when the orbit overflowed to a non-finite value.
    pub note: Option<String>,
}

/// Float snapshot of a map for fast repeated evaluation.
#[derive(Clone, Debug)]
pub struct FloatMap {
    f1: Poly2F,
    f2: Poly2F,
}

impl FloatMap {
    pub fn new(map: &PolyMap) -> Self {
        FloatMap {
            f1: Poly2F::from(&map.f1),
            f2: Poly2F::from(&map.f2),
        }
    }

    pub fn apply(&self, p: (f64, f64)) -> (f64, f64) {
        (self.f1.eval(p.0, p.1), self.f2.eval(p.0, p.1))
    }

    /// Iterates from `x0` until the orbit enters the `conv_tol` ball, leaves
    /// the `escape_radius` ball or runs out of steps.
    pub fn iterate(&self, x0: (f64, f64), cfg: &OrbitConfig) -> OrbitResult {
        let mut p = x0;
        let mut norm = p.0.hypot(p.1);
        let mut steps = 0u64;
        loop {
            if !norm.is_finite() {
                return OrbitResult {
                    outcome: Outcome::Escaped(steps),
                    final_point: p,
                    final_norm: f64::INFINITY,
                    note: Some(format!("non-finite value after {steps} steps")),
                };
            }
            let outcome = if norm < cfg.conv_tol {
                Some(Outcome::Converged(steps))
            } else if norm > cfg.escape_radius {
                Some(Outcome::Escaped(steps))
            } else if steps >= cfg.max_iter {
                Some(Outcome::Undecided)
            } else {
                None
            };
            if let Some(outcome) = outcome {
                return OrbitResult {
                    outcome,
                    final_point: p,
                    final_norm: norm,
                    note: None,
                };
            }
            p = self.apply(p);
            norm = p.0.hypot(p.1);
            steps += 1;
        }
    }
}

pub fn iterate(map: &PolyMap, x0: (f64, f64), cfg: &OrbitConfig) -> OrbitResult {
    FloatMap::new(map).iterate(x0, cfg)
}

/// Regular grid `{−extent + k·step}²` clipped to `[−extent, extent]²`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub extent: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), DynamicsError> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(DynamicsError::InvalidGrid("step must be positive".into()));
        }
        if !(self.extent >= 0.0 && self.extent.is_finite()) {
            return Err(DynamicsError::InvalidGrid("extent must be nonnegative".into()));
        }
        if self.points_per_axis() > 100_000 {
            return Err(DynamicsError::InvalidGrid("more than 10^5 points per axis".into()));
        }
        Ok(())
    }

    pub fn points_per_axis(&self) -> usize {
        // tolerate rounding so that e.g. extent 10, step 0.5 gives 41
        ((2.0 * self.extent / self.step) * (1.0 + 1e-12)).floor() as usize + 1
    }

    pub fn coordinate(&self, k: usize) -> f64 {
        -self.extent + k as f64 * self.step
    }

    pub fn len(&self) -> usize {
        self.points_per_axis().pow(2)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Exception {
    pub start: (f64, f64),
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasinSummary {
    pub grid: GridSpec,
    pub converged: usize,
    pub escaped: usize,
    pub undecided: usize,
    /// Most steps taken by a converging orbit.
    pub worst_steps: u64,
    /// Non-converging starts sorted by `(x, y)`.
    pub exceptions: Vec<Exception>,
}

impl BasinSummary {
    pub fn total(&self) -> usize {
        self.converged + self.escaped + self.undecided
    }

    pub fn all_converged(&self) -> bool {
        self.exceptions.is_empty()
    }

    /// One row per exception: `x0_x,x0_y,outcome,steps` (steps empty for `Undecided`).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x0_x,x0_y,outcome,steps\n");
        for e in &self.exceptions {
            let steps = e.outcome.steps().map(|s| s.to_string()).unwrap_or_default();
            out.push_str(&format!("{},{},{},{}\n", e.start.0, e.start.1, e.outcome.name(), steps));
        }
        out
    }
}

/// Iterates from every grid point; the summary does not depend on the
/// parallel schedule.
pub fn basin_scan(map: &PolyMap, grid: &GridSpec, cfg: &OrbitConfig) -> Result<BasinSummary, DynamicsError> {
    grid.validate()?;
    cfg.validate()?;
    let fm = FloatMap::new(map);
    let n = grid.points_per_axis();
    let results: Vec<((f64, f64), Outcome)> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let start = (grid.coordinate(idx / n), grid.coordinate(idx % n));
            (start, fm.iterate(start, cfg).outcome)
        })
        .collect();
    let mut summary = BasinSummary {
        grid: *grid,
        converged: 0,
        escaped: 0,
        undecided: 0,
        worst_steps: 0,
        exceptions: Vec::new(),
    };
    for (start, outcome) in results {
        match outcome {
            Outcome::Converged(s) => {
                summary.converged += 1;
                summary.worst_steps = summary.worst_steps.max(s);
                continue;
            }
            Outcome::Escaped(_) => summary.escaped += 1,
            Outcome::Undecided => summary.undecided += 1,
        }
        summary.exceptions.push(Exception { start, outcome });
    }
    summary
        .exceptions
        .sort_by(|a, b| a.start.0.total_cmp(&b.start.0).then(a.start.1.total_cmp(&b.start.1)));
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mapio::parse_map;

    fn map(text: &str) -> PolyMap {
        parse_map(text).unwrap()
    }

    #[test]
    fn orbit_examples() {
        let cfg = OrbitConfig::default();
        assert!(matches!(
            iterate(&map("(x/2, y/3 + x^2)"), (1.0, 1.0), &cfg).outcome,
            Outcome::Converged(_)
        ));
        assert!(matches!(
            iterate(&map("(2*x, y/2)"), (1.0, 0.0), &cfg).outcome,
            Outcome::Escaped(_)
        ));
        let r = iterate(&PolyMap::zero(), (3.0, -7.0), &cfg);
        assert_eq!(r.outcome, Outcome::Converged(1));
        assert_eq!(r.final_norm, 0.0);
    }

    #[test]
    fn rotation_is_undecided() {
        let cfg = OrbitConfig {
            max_iter: 1000,
            ..OrbitConfig::default()
        };
        let r = iterate(&map("(-y, x)"), (1.0, 0.0), &cfg);
        assert_eq!(r.outcome, Outcome::Undecided);
    }

    #[test]
    fn overflow_counts_as_escape() {
        let cfg = OrbitConfig {
            escape_radius: f64::MAX,
            ..OrbitConfig::default()
        };
        let r = iterate(&map("(x^9, y)"), (1e40, 0.0), &cfg);
        assert!(matches!(r.outcome, Outcome::Escaped(1)));
        assert!(r.note.is_some());
    }

    #[test]
    fn linear_contraction_step_count() {
        let cfg = OrbitConfig::default();
        for (c, text) in [
            (0.5, "(x/2, y/2)"),
            (0.9, "(9/10*x, 9/10*y)"),
            (-0.3, "(-3/10*x, -3/10*y)"),
        ] {
            let x0 = (3.0, 4.0);
            let expected = (cfg.conv_tol / 5.0f64).ln() / f64::ln(f64::abs(c));
            let Outcome::Converged(n) = iterate(&map(text), x0, &cfg).outcome else {
                panic!("{text}");
            };
            assert!((n as f64 - expected).abs() <= 2.0, "{text}: {n} vs {expected}");
        }
    }

    #[test]
    fn basin_examples() {
        let grid = GridSpec {
            extent: 10.0,
            step: 0.5,
        };
        assert_eq!(grid.len(), 1681);
        let cfg = OrbitConfig::default();
        let s = basin_scan(&map("(x/2, y/3 + x^2)"), &grid, &cfg).unwrap();
        assert_eq!((s.converged, s.total()), (1681, 1681));
        let s = basin_scan(&map("(x/2 + y^2, y/3 + y^3)"), &grid, &cfg).unwrap();
        assert!(!s.all_converged());
        assert_eq!(s.total(), 1681);
        assert!(s.to_csv().lines().count() == s.exceptions.len() + 1);
        let s = basin_scan(&map("(9/10*x, 9/10*y)"), &GridSpec { extent: 3.0, step: 1.0 }, &cfg).unwrap();
        assert!(s.all_converged());
        assert!(basin_scan(&PolyMap::zero(), &GridSpec { extent: 1.0, step: 0.0 }, &cfg).is_err());
    }

    #[test]
    fn exceptions_sorted() {
        let grid = GridSpec { extent: 2.0, step: 1.0 };
        let s = basin_scan(&map("(2*x, 2*y)"), &grid, &OrbitConfig::default()).unwrap();
        assert_eq!(s.exceptions.len(), 24);
        assert_eq!(s.converged, 1);
        assert!(s
            .exceptions
            .windows(2)
            .all(|w| (w[0].start.0, w[0].start.1) < (w[1].start.0, w[1].start.1)));
    }
}
