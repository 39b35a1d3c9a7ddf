use thiserror::Error;

use crate::scenario::Diagnostic;
use crate::solver::InfeasibilityReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Link endpoints coincide, so no segment exists between them.
    #[error("degenerate link: endpoints coincide at ({x}, {y}, {z})")]
    DegenerateSegment { x: f64, y: f64, z: f64 },

    #[error("point ({x}, {y}) lies inside the obstacle footprint")]
    InsideFootprint { x: f64, y: f64 },

    #[error("invalid obstacle: {0}")]
    InvalidObstacle(String),

    #[error("distance must be positive, got {0} m")]
    NonPositiveDistance(f64),

    #[error("traffic demand must be positive, got {0} bit/s")]
    NonPositiveDemand(f64),

    #[error("demand {demand_bps} bit/s exceeds the highest MCS rate {max_rate_bps} bit/s")]
    DemandExceedsTable { demand_bps: f64, max_rate_bps: f64 },

    #[error("invalid MCS table: {0}")]
    InvalidMcsTable(String),

    #[error("grid resolution must be positive and finite, got {0} m")]
    InvalidResolution(f64),

    #[error("grid of {points} points exceeds the limit of {limit}; use a coarser resolution")]
    GridTooLarge { points: u128, limit: u128 },

    #[error("transmit power {tx_power_dbm} dBm outside [0, {max_tx_power_dbm}] dBm")]
    TxPowerOutOfRange { tx_power_dbm: f64, max_tx_power_dbm: f64 },

    #[error("invalid trace parameters: {0}")]
    InvalidTrace(String),

    #[error("malformed document: {0}")]
    Parse(String),

    #[error("scenario failed validation: {}", format_diagnostics(.0))]
    Validation(Vec<Diagnostic>),

    #[error("no feasible position up to the maximum transmit power")]
    Infeasible(InfeasibilityReport),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn format_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse(err.to_string())
    }
}
