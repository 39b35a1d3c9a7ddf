//! Traffic- and obstacle-aware positioning of a single UAV access point.
//!
//! Given ground users with traffic demands and box-shaped obstacles, the
//! [`solver`] finds the lowest transmit power (swept in fixed steps from
//! 0 dBm) at which some UAV position both keeps line of sight to every user
//! and lies inside every user's demand sphere, together with such a
//! position. The [`eval`] module compares candidate positions by the
//! aggregate throughput a shared CSMA/CA channel would deliver.
//!
//! ```
//! use topa_core::{load_scenario, solve_position};
//!
//! let scenario = load_scenario(r#"{
//!     "ues": [
//!         {"id": "UE1", "position": [0, -15, 1], "demand_mbps": 117},
//!         {"id": "UE2", "position": [0, 20, 1], "demand_mbps": 58.5}
//!     ],
//!     "obstacles": [{"center": [0, 0], "size": [10, 10, 20]}],
//!     "bounds": {"min": [-5, -30, 0], "max": [5, 30, 60]},
//!     "radio": {"frequency_mhz": 5250, "noise_floor_dbm": -85, "max_tx_power_dbm": 20}
//! }"#).unwrap();
//! let solution = solve_position(&scenario).unwrap();
//! assert_eq!(solution.tx_power_dbm, 6.0);
//! ```

pub mod error;
pub mod eval;
pub mod geom;
pub mod radio;
pub mod scenario;
pub mod solver;

pub use error::{Error, Result};
pub use eval::{
    aggregate_throughput, compare_positions, link_report, throughput_trace, LinkReport, NamedPosition,
    PositionReport, PositionsDocument, Trace,
};
pub use geom::{has_los, segment_intersects_box, BoxObstacle, Point3};
pub use radio::{k_constant, max_distance_m, snr_db, McsEntry, McsTable, RadioConfig};
pub use scenario::{load_scenario, validate, Diagnostic, DiagnosticCode, EvalParams, Scenario, SearchBounds};
pub use solver::{
    build_context, is_feasible, min_power_bruteforce, sample_feasible_region, solve_position, FeasibilityContext,
    Solution, SolverOptions,
};
