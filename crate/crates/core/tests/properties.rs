use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use topa_core::solver::{solve_position_with, Grid};
use topa_core::{
    build_context, has_los, is_feasible, load_scenario, min_power_bruteforce, sample_feasible_region,
    solve_position, BoxObstacle, Error, Point3, Scenario, SolverOptions,
};

fn scenario_a() -> Scenario {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../scenarios/scenario-a.json");
    Scenario::from_path(path).unwrap()
}

/// Up to four UEs and two buildings inside a 30 m cube; bounds corners are
/// integers so 1 m lattices stay aligned under integer translations.
fn random_scenario(rng: &mut ChaCha8Rng) -> Scenario {
    loop {
        let obstacles: Vec<String> = (0..rng.gen_range(0..=2))
            .map(|i| {
                format!(
                    r#"{{"id": "b{i}", "center": [{}, {}], "size": [{}, {}, {}]}}"#,
                    rng.gen_range(-8.0..8.0),
                    rng.gen_range(-8.0..8.0),
                    rng.gen_range(2.0..10.0),
                    rng.gen_range(2.0..10.0),
                    rng.gen_range(3.0..25.0)
                )
            })
            .collect();
        let ues: Vec<String> = (0..rng.gen_range(1..=4))
            .map(|i| {
                format!(
                    r#"{{"id": "u{i}", "position": [{}, {}, {}], "demand_mbps": {}}}"#,
                    rng.gen_range(-15.0..15.0),
                    rng.gen_range(-15.0..15.0),
                    rng.gen_range(0.0..2.0),
                    [58.5, 117.0, 175.5, 234.0][rng.gen_range(0..4)]
                )
            })
            .collect();
        let doc = format!(
            r#"{{"ues": [{}], "obstacles": [{}], "bounds": {{"min": [-15, -15, 0], "max": [15, 15, 30]}},
                "radio": {{"frequency_mhz": 5250, "noise_floor_dbm": -85, "max_tx_power_dbm": 20}}}}"#,
            ues.join(","),
            obstacles.join(",")
        );
        if let Ok(s) = load_scenario(&doc) {
            return s;
        }
    }
}

fn sum_sq(p: &Point3, s: &Scenario) -> f64 {
    s.ues.iter().map(|u| u.position.distance_sq(p)).sum()
}

#[test]
fn solver_power_matches_bruteforce_on_random_scenarios() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut infeasible = 0;
    for _ in 0..60 {
        let s = random_scenario(&mut rng);
        let brute = min_power_bruteforce(&s, 1.0).unwrap();
        match solve_position(&s) {
            Ok(sol) => {
                assert_eq!(Some(sol.tx_power_dbm), brute);
                let ctx = build_context(&s, sol.tx_power_dbm).unwrap();
                assert!(is_feasible(sol.position, &ctx, &s));
                // Refinement never loses against the best lattice point.
                let region = sample_feasible_region(&ctx, &s, 1.0).unwrap();
                let lattice_best = region.iter().map(|p| sum_sq(p, &s)).fold(f64::INFINITY, f64::min);
                assert!(sol.sum_sq_distance_m2 <= lattice_best + 1e-9);
            }
            Err(Error::Infeasible(report)) => {
                assert_eq!(brute, None);
                assert_eq!(report.levels.len(), s.radio.power_levels().len());
                infeasible += 1;
            }
            Err(e) => panic!("unexpected error {e}"),
        }
    }
    assert!(infeasible < 60);
}

#[test]
fn solver_power_matches_bruteforce_on_scenario_a_at_half_meter() {
    let s = scenario_a();
    let opts = SolverOptions {
        grid_resolution_m: 0.5,
        ..SolverOptions::default()
    };
    let sol = solve_position_with(&s, &opts).unwrap();
    assert_eq!(Some(sol.tx_power_dbm), min_power_bruteforce(&s, 0.5).unwrap());
}

#[test]
fn one_below_minimum_power_has_empty_region() {
    let s = scenario_a();
    let ctx = build_context(&s, 5.0).unwrap();
    assert!(sample_feasible_region(&ctx, &s, 0.25).unwrap().is_empty());
}

#[test]
fn translation_shifts_solution() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let s = random_scenario(&mut rng);
        let v = Point3::new(
            rng.gen_range(-50..50) as f64,
            rng.gen_range(-50..50) as f64,
            rng.gen_range(0..20) as f64,
        );
        let moved = s.translated(v);
        match (solve_position(&s), solve_position(&moved)) {
            (Ok(a), Ok(b)) => {
                assert_eq!(a.tx_power_dbm, b.tx_power_dbm);
                assert!((a.sum_sq_distance_m2 - b.sum_sq_distance_m2).abs() < 1e-6);
                assert!((a.position + v).distance(&b.position) < 1e-6, "{} + {v} vs {}", a.position, b.position);
            }
            (Err(Error::Infeasible(_)), Err(Error::Infeasible(_))) => {}
            (a, b) => panic!("outcomes differ: {:?} vs {:?}", a.is_ok(), b.is_ok()),
        }
    }
}

#[test]
fn region_is_x_major_and_on_lattice() {
    let s = scenario_a();
    let ctx = build_context(&s, 8.0).unwrap();
    let region = sample_feasible_region(&ctx, &s, 1.0).unwrap();
    assert!(!region.is_empty());
    let key = |p: &Point3| (p.x, p.y, p.z);
    assert!(region.windows(2).all(|w| key(&w[0]) < key(&w[1])));
    let grid = Grid::over_bounds(&s.bounds, 1.0).unwrap();
    assert_eq!(grid.point(0, 0, 0), s.bounds.min);
    for p in &region {
        for v in [p.x - s.bounds.min.x, p.y - s.bounds.min.y, p.z - s.bounds.min.z] {
            assert!((v - v.round()).abs() < 1e-9);
        }
    }
}

#[test]
fn solve_is_repeatable() {
    let s = scenario_a();
    let a = serde_json::to_string(&solve_position(&s).unwrap()).unwrap();
    let b = serde_json::to_string(&solve_position(&s).unwrap()).unwrap();
    assert_eq!(a, b);
}

fn arb_box() -> impl Strategy<Value = BoxObstacle> {
    (-20.0..20.0f64, -20.0..20.0f64, 1.0..15.0f64, 1.0..15.0f64, 1.0..30.0f64)
        .prop_map(|(x, y, l, w, h)| BoxObstacle::from_footprint(x, y, l, w, h).unwrap())
}

fn arb_point() -> impl Strategy<Value = Point3> {
    (-40.0..40.0f64, -40.0..40.0f64, 0.0..50.0f64).prop_map(|(x, y, z)| Point3::new(x, y, z))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn los_is_symmetric(b in arb_box(), p in arb_point(), q in arb_point()) {
        prop_assume!(p.distance(&q) > 1e-6);
        let boxes = [b];
        prop_assert_eq!(has_los(p, q, &boxes).unwrap(), has_los(q, p, &boxes).unwrap());
    }

    #[test]
    fn los_survives_translation(b in arb_box(), p in arb_point(), q in arb_point(),
                                dx in -100i32..100, dy in -100i32..100, dz in 0i32..50) {
        prop_assume!(p.distance(&q) > 1e-6);
        let v = Point3::new(dx as f64, dy as f64, dz as f64);
        let here = has_los(p, q, &[b]).unwrap();
        let there = has_los(p + v, q + v, &[b.translated(v)]).unwrap();
        prop_assert_eq!(here, there);
    }

    #[test]
    fn adding_an_obstacle_never_creates_los(b in arb_box(), extra in arb_box(), p in arb_point(), q in arb_point()) {
        prop_assume!(p.distance(&q) > 1e-6);
        if !has_los(p, q, &[b]).unwrap() {
            prop_assert!(!has_los(p, q, &[b, extra]).unwrap());
        }
    }
}
