//! Numeric search for a point where the Jacobian has an eigenvalue of
//! modulus at least one.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::mapio::PolyMap;
use crate::ratpoly::{nearest_dyadic, Rat};

use super::{jacobian, jury_inside_closed, JacobianF64, JacobianSym};

/// A witness must beat `1 + WITNESS_MARGIN` in float arithmetic.
pub const WITNESS_MARGIN: f64 = 1e-9;

/// Denominator exponent of the rational point used for exact re-checks.
pub const RECHECK_BITS: u32 = 40;

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    pub grid_extent: f64,
    pub grid_step: f64,
    pub restarts: usize,
    pub seed: u64,
    pub max_iters: usize,
    /// Extent (and step) double after each exhausted round until this is passed.
    pub max_extent: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            grid_extent: 16.0,
            grid_step: 0.25,
            restarts: 8,
            seed: 42,
            max_iters: 10_000,
            max_extent: 1024.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub point: (f64, f64),
    pub spectral_radius: f64,
    /// The exact disk test at [`nearest_rational_point`] still finds an
    /// eigenvalue of modulus strictly greater than one.
    pub certified: bool,
}

/// Nearest point with coordinates in `2^-40 ℤ`.
pub fn nearest_rational_point(point: (f64, f64)) -> Option<(Rat, Rat)> {
    Some((
        nearest_dyadic(point.0, RECHECK_BITS)?,
        nearest_dyadic(point.1, RECHECK_BITS)?,
    ))
}

impl Witness {
    fn at(jac: &JacobianSym, point: (f64, f64), spectral_radius: f64) -> Self {
        let certified = nearest_rational_point(point)
            .map(|(x, y)| {
                let (t, d) = jac.trace_det_at(&x, &y);
                !jury_inside_closed(&t, &d)
            })
            .unwrap_or(false);
        Witness {
            point,
            spectral_radius,
            certified,
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Sample {
    radius: f64,
    x: f64,
    y: f64,
}

/// Larger radius first, then lexicographically smaller point.
fn rank(a: &Sample, b: &Sample) -> Ordering {
    b.radius
        .total_cmp(&a.radius)
        .then(a.x.total_cmp(&b.x))
        .then(a.y.total_cmp(&b.y))
}

fn sample(jac: &JacobianF64, x: f64, y: f64) -> Sample {
    let r = jac.spectral_radius(x, y);
    Sample {
        radius: if r.is_finite() { r } else { f64::NEG_INFINITY },
        x,
        y,
    }
}

fn grid_scan(jac: &JacobianF64, extent: f64, step: f64) -> Vec<Sample> {
    let n = (2.0 * extent / step).round() as i64;
    let coord = move |k: i64| -extent + k as f64 * step;
    let mut cells: Vec<Sample> = (0..=n)
        .into_par_iter()
        .flat_map_iter(|i| (0..=n).map(move |j| sample(jac, coord(i), coord(j))))
        .collect();
    cells.sort_by(rank);
    cells
}

/// Compass search from `start`; returns the first point over threshold.
fn ascend(jac: &JacobianF64, start: Sample, step: f64, budget: usize, threshold: f64) -> Option<Sample> {
    let mut cur = start;
    let mut s = step;
    let mut evals = 0;
    while evals < budget && s > 1e-12 {
        let best = [(s, 0.0), (-s, 0.0), (0.0, s), (0.0, -s)]
            .iter()
            .map(|(dx, dy)| sample(jac, cur.x + dx, cur.y + dy))
            .min_by(rank)
            .expect("four neighbours");
        evals += 4;
        if best.radius > cur.radius {
            cur = best;
            if cur.radius >= threshold {
                return Some(cur);
            }
        } else {
            s /= 2.0;
        }
    }
    None
}

/// Looks for a point where the spectral radius of `JF` is at least `1 + 1e-9`.
///
/// Scans a grid on `[-extent, extent]²`, then runs compass ascent from the
/// `restarts` best cells (jittered deterministically from `seed`). On
/// exhaustion both extent and step double, up to `max_extent`. The result
/// depends only on the map and the configuration.
pub fn witness_search(map: &PolyMap, cfg: &SearchConfig) -> Option<Witness> {
    let exact = jacobian(map);
    let jac = exact.to_f64();
    let threshold = 1.0 + WITNESS_MARGIN;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut extent = cfg.grid_extent;
    let mut step = cfg.grid_step;
    loop {
        let cells = grid_scan(&jac, extent, step);
        if let Some(best) = cells.first().filter(|c| c.radius >= threshold) {
            return Some(Witness::at(&exact, (best.x, best.y), best.radius));
        }
        for cell in cells.iter().take(cfg.restarts) {
            let jitter_x = rng.gen_range(-0.5..0.5) * step;
            let jitter_y = rng.gen_range(-0.5..0.5) * step;
            let start = sample(&jac, cell.x + jitter_x, cell.y + jitter_y);
            let start = if rank(&start, cell) == Ordering::Less {
                start
            } else {
                *cell
            };
            if let Some(found) = ascend(&jac, start, step, cfg.max_iters, threshold) {
                return Some(Witness::at(&exact, (found.x, found.y), found.radius));
            }
        }
        if extent * 2.0 > cfg.max_extent {
            return None;
        }
        extent *= 2.0;
        step *= 2.0;
    }
}
