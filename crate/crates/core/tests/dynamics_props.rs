mod common;

use common::*;
use dmy_core::dynamics::{basin_scan, iterate, FloatMap, GridSpec, OrbitConfig, Outcome};
use dmy_core::mapio::{parse_map, PolyMap};
use dmy_core::ratpoly::{rat, Mat2, Poly2};
use proptest::prelude::*;

fn linear_map(m: &Mat2) -> PolyMap {
    PolyMap::from_parts(
        Poly2::linear(m.get(0, 0), m.get(0, 1)),
        Poly2::linear(m.get(1, 0), m.get(1, 1)),
    )
}

type Start = ((f64, f64), Outcome);

/// Single-threaded reference scan: converged, escaped, undecided, worst steps, exceptions.
fn sequential(map: &PolyMap, grid: &GridSpec, cfg: &OrbitConfig) -> (usize, usize, usize, u64, Vec<Start>) {
    let fm = FloatMap::new(map);
    let (mut c, mut e, mut u, mut worst) = (0, 0, 0, 0);
    let mut exceptions = Vec::new();
    let n = grid.points_per_axis();
    for i in 0..n {
        for j in 0..n {
            let start = (grid.coordinate(i), grid.coordinate(j));
            match fm.iterate(start, cfg).outcome {
                Outcome::Converged(s) => {
                    c += 1;
                    worst = worst.max(s);
                }
                o @ Outcome::Escaped(_) => {
                    e += 1;
                    exceptions.push((start, o));
                }
                o @ Outcome::Undecided => {
                    u += 1;
                    exceptions.push((start, o));
                }
            }
        }
    }
    (c, e, u, worst, exceptions)
}

#[test]
fn parallel_scan_matches_sequential() {
    let cfg = OrbitConfig {
        max_iter: 2000,
        ..OrbitConfig::default()
    };
    let grid = GridSpec {
        extent: 3.0,
        step: 0.25,
    };
    let mut r = rng(51);
    let mut maps: Vec<PolyMap> = (0..6).map(|_| random_hypotheses_map(&mut r)).collect();
    maps.extend((0..6).map(|_| random_map(&mut r, 1, 3)));
    maps.push(parse_map("(x/2 + y^2, y/3 + y^3)").unwrap());
    for map in maps {
        let s = basin_scan(&map, &grid, &cfg).unwrap();
        let (c, e, u, worst, ex) = sequential(&map, &grid, &cfg);
        assert_eq!(
            (s.converged, s.escaped, s.undecided, s.worst_steps),
            (c, e, u, worst),
            "{map}"
        );
        assert_eq!(s.total(), grid.len());
        let got: Vec<Start> = s.exceptions.iter().map(|x| (x.start, x.outcome)).collect();
        assert_eq!(got, ex, "{map}");
    }
}

#[test]
fn grid_sizes() {
    assert_eq!(
        GridSpec {
            extent: 10.0,
            step: 0.5
        }
        .points_per_axis(),
        41
    );
    assert_eq!(GridSpec { extent: 1.0, step: 0.3 }.points_per_axis(), 7);
    assert_eq!(GridSpec { extent: 0.0, step: 1.0 }.len(), 1);
    assert!(GridSpec { extent: 1.0, step: 0.0 }.validate().is_err());
}

proptest! {
    #![proptest_config(cases(200))]

    /// `λ·I` with `0 < |λ| < 1` from norm `N` needs `⌈log(tol/N)/log|λ|⌉` steps.
    #[test]
    fn contraction_step_count(k in 1i64..8, neg in any::<bool>(), x in -50.0f64..50.0, y in -50.0f64..50.0) {
        let lambda = rat(if neg { -k } else { k }, 8);
        let map = linear_map(&Mat2::diag(lambda.clone(), lambda));
        let cfg = OrbitConfig::default();
        let n0 = x.hypot(y);
        prop_assume!(n0 > 1e-6);
        let predicted = ((cfg.conv_tol / n0).ln() / (k as f64 / 8.0).ln()).ceil();
        let res = iterate(&map, (x, y), &cfg);
        let Outcome::Converged(s) = res.outcome else {
            return Err(TestCaseError::fail(format!("{:?}", res.outcome)));
        };
        prop_assert!((s as f64 - predicted).abs() <= 1.0, "{} vs {}", s, predicted);
        prop_assert!(res.final_norm < cfg.conv_tol);
    }

    /// A scaled rotation `[[p, −q], [q, p]]` shrinks norms by `√(p² + q²)`.
    #[test]
    fn rotation_contraction_step_count(p in -6i64..=6, q in -6i64..=6, x in -20.0f64..20.0, y in -20.0f64..20.0) {
        let rho = ((p * p + q * q) as f64).sqrt() / 10.0;
        prop_assume!(rho > 0.05 && rho < 0.95);
        let m = Mat2::new(rat(p, 10), rat(-q, 10), rat(q, 10), rat(p, 10));
        let cfg = OrbitConfig::default();
        let n0 = x.hypot(y);
        prop_assume!(n0 > 1e-6);
        let predicted = ((cfg.conv_tol / n0).ln() / rho.ln()).ceil();
        let Outcome::Converged(s) = iterate(&linear_map(&m), (x, y), &cfg).outcome else {
            return Err(TestCaseError::fail("did not converge"));
        };
        prop_assert!((s as f64 - predicted).abs() <= 1.0, "{} vs {}", s, predicted);
    }

    #[test]
    fn expansion_escapes(k in 9i64..40, x in -50.0f64..50.0, y in -50.0f64..50.0) {
        let lambda = rat(k, 8);
        let map = linear_map(&Mat2::diag(lambda.clone(), lambda));
        let cfg = OrbitConfig::default();
        let n0 = x.hypot(y);
        prop_assume!(n0 > 1e-3);
        let predicted = ((cfg.escape_radius / n0).ln() / (k as f64 / 8.0).ln()).ceil();
        let Outcome::Escaped(s) = iterate(&map, (x, y), &cfg).outcome else {
            return Err(TestCaseError::fail("did not escape"));
        };
        prop_assert!((s as f64 - predicted).abs() <= 1.0, "{} vs {}", s, predicted);
    }

    #[test]
    fn counts_cover_the_grid(seed in any::<u64>(), extent in 0.0f64..3.0, step in 0.2f64..1.0) {
        let map = random_map(&mut rng(seed), 1, 3);
        let grid = GridSpec { extent, step };
        let cfg = OrbitConfig { max_iter: 500, ..OrbitConfig::default() };
        let s = basin_scan(&map, &grid, &cfg).unwrap();
        prop_assert_eq!(s.total(), grid.len());
        prop_assert_eq!(s.exceptions.len(), s.escaped + s.undecided);
        prop_assert!(s.exceptions.windows(2).all(|w| (w[0].start.0, w[0].start.1) <= (w[1].start.0, w[1].start.1)));
    }
}
