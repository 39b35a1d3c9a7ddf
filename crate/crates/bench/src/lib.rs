//! Fixtures shared by the benchmarks.

use topa_core::{load_scenario, BoxObstacle, Point3, Scenario};

pub const SCENARIO_A: &str = include_str!("../../../scenarios/scenario-a.json");
pub const SCENARIO_B: &str = include_str!("../../../scenarios/scenario-b.json");

pub fn scenario_a() -> Scenario {
    load_scenario(SCENARIO_A).expect("scenario A loads")
}

pub fn scenario_b() -> Scenario {
    load_scenario(SCENARIO_B).expect("scenario B loads")
}

/// Deterministic segment endpoints around a 10 m cube; roughly a third cross it.
pub fn segment_fixtures(n: usize) -> (BoxObstacle, Vec<(Point3, Point3)>) {
    let building = BoxObstacle::from_footprint(0.0, 0.0, 10.0, 10.0, 20.0).expect("valid box");
    let mut state = 0x9e37_79b9_7f4a_7c15u64;
    let mut next = move || {
        // xorshift64*
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        (state.wrapping_mul(0x2545_f491_4f6c_dd1d) >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut point = || Point3::new(next() * 60.0 - 30.0, next() * 60.0 - 30.0, next() * 40.0);
    let segments = (0..n).map(|_| (point(), point())).collect();
    (building, segments)
}
