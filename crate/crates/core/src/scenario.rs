//! Problem instances: ground users, obstacles, search bounds, radio and
//! evaluator settings, plus the JSON file format they are read from.
//!
//! File units are meters, MHz and Mbit/s; in memory everything is SI.
//! One scenario describes one time slot; re-positioning over time means
//! solving a new file.

use std::collections::HashSet;
use std::fmt;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{BoxObstacle, Point3};
use crate::radio::{McsTable, McsTableDocument, RadioConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct UserEquipment {
    pub id: String,
    pub position: Point3,
    pub demand_bps: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBounds {
    pub min: Point3,
    pub max: Point3,
}

impl SearchBounds {
    pub fn contains(&self, p: &Point3) -> bool {
        (0..3).all(|k| p.axis(k) >= self.min.axis(k) && p.axis(k) <= self.max.axis(k))
    }

    pub fn is_valid(&self) -> bool {
        self.min.is_finite()
            && self.max.is_finite()
            && (0..3).all(|k| self.min.axis(k) < self.max.axis(k))
            && self.min.z >= 0.0
    }
}

/// How the shared channel is split once offered airtime exceeds 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SharingPolicy {
    /// Scale every flow by the same factor, keeping demand ratios.
    #[default]
    Proportional,
    /// Equal airtime per live link, with unused share redistributed.
    EqualAirtime,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalParams {
    pub eval_tx_power_dbm: f64,
    pub nlos_penalty_db: f64,
    pub mac_efficiency: f64,
    pub packet_size_bytes: u32,
    pub sharing: SharingPolicy,
}

impl Default for EvalParams {
    fn default() -> Self {
        Self {
            eval_tx_power_dbm: 20.0,
            nlos_penalty_db: 15.0,
            mac_efficiency: 0.65,
            packet_size_bytes: 1024,
            sharing: SharingPolicy::Proportional,
        }
    }
}

/// Named obstacle as described in the scenario file.
#[derive(Debug, Clone, PartialEq)]
pub struct Obstacle {
    pub id: String,
    pub center: [f64; 2],
    /// Length along x, width along y, height.
    pub size: [f64; 3],
    pub shape: BoxObstacle,
}

impl Obstacle {
    pub fn new(id: impl Into<String>, center: [f64; 2], size: [f64; 3]) -> Result<Self> {
        let shape = BoxObstacle::from_footprint(center[0], center[1], size[0], size[1], size[2])?;
        Ok(Self {
            id: id.into(),
            center,
            size,
            shape,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub ues: Vec<UserEquipment>,
    pub obstacles: Vec<Obstacle>,
    pub bounds: SearchBounds,
    pub radio: RadioConfig,
    pub mcs_table: McsTable,
    pub eval_params: EvalParams,
}

impl Scenario {
    pub fn boxes(&self) -> Vec<BoxObstacle> {
        self.obstacles.iter().map(|o| o.shape).collect()
    }

    pub fn ue(&self, id: &str) -> Option<&UserEquipment> {
        self.ues.iter().find(|u| u.id == id)
    }

    /// Reads a scenario file; a string-valued `mcs_table` is resolved
    /// relative to the file's directory.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)?;
        Self::from_json_str(&text, path.parent())
    }

    pub fn from_json_str(text: &str, base_dir: Option<&Path>) -> Result<Self> {
        let doc: ScenarioDocument = serde_json::from_str(text)?;
        Self::from_document(doc, base_dir)
    }

    pub fn from_document(doc: ScenarioDocument, base_dir: Option<&Path>) -> Result<Self> {
        let mut diags = Vec::new();

        let mcs_table = match doc.mcs_table {
            None => McsTable::canonical(),
            Some(McsTableSource::Inline(table)) => McsTable::from_document(table).map_err(table_diag)?,
            Some(McsTableSource::Path(rel)) => {
                let path = base_dir.map_or_else(|| Path::new(&rel).to_path_buf(), |dir| dir.join(&rel));
                let text = fs::read_to_string(&path)
                    .map_err(|e| Error::Parse(format!("cannot read MCS table {}: {e}", path.display())))?;
                McsTable::from_json_str(&text).map_err(table_diag)?
            }
        };

        let mut obstacles = Vec::with_capacity(doc.obstacles.len());
        for (i, o) in doc.obstacles.into_iter().enumerate() {
            let id = o.id.unwrap_or_else(|| format!("obstacle-{}", i + 1));
            match Obstacle::new(id.clone(), o.center, o.size) {
                Ok(obstacle) => obstacles.push(obstacle),
                Err(e) => diags.push(Diagnostic::new(DiagnosticCode::InvalidObstacle, Some(&id), e.to_string())),
            }
        }

        let eval = doc.eval.unwrap_or_default();
        let defaults = EvalParams::default();
        let scenario = Scenario {
            ues: doc
                .ues
                .into_iter()
                .map(|u| UserEquipment {
                    id: u.id,
                    position: u.position.into(),
                    demand_bps: u.demand_mbps * 1e6,
                })
                .collect(),
            obstacles,
            bounds: SearchBounds {
                min: doc.bounds.min.into(),
                max: doc.bounds.max.into(),
            },
            radio: RadioConfig {
                frequency_hz: doc.radio.frequency_mhz * 1e6,
                noise_floor_dbm: doc.radio.noise_floor_dbm,
                max_tx_power_dbm: doc.radio.max_tx_power_dbm,
                tx_power_step_db: doc
                    .radio
                    .tx_power_step_db
                    .unwrap_or(RadioConfig::DEFAULT_TX_POWER_STEP_DB),
            },
            mcs_table,
            eval_params: EvalParams {
                eval_tx_power_dbm: eval.tx_power_dbm.unwrap_or(defaults.eval_tx_power_dbm),
                nlos_penalty_db: eval.nlos_penalty_db.unwrap_or(defaults.nlos_penalty_db),
                mac_efficiency: eval.mac_efficiency.unwrap_or(defaults.mac_efficiency),
                packet_size_bytes: eval.packet_size_bytes.unwrap_or(defaults.packet_size_bytes),
                sharing: eval.sharing.unwrap_or(defaults.sharing),
            },
        };

        diags.extend(validate(&scenario));
        if diags.is_empty() {
            Ok(scenario)
        } else {
            Err(Error::Validation(diags))
        }
    }

    /// Fully explicit document: defaults written out, MCS table inlined.
    pub fn to_document(&self) -> ScenarioDocument {
        ScenarioDocument {
            ues: self
                .ues
                .iter()
                .map(|u| UeDocument {
                    id: u.id.clone(),
                    position: u.position.into(),
                    demand_mbps: u.demand_bps / 1e6,
                })
                .collect(),
            obstacles: self
                .obstacles
                .iter()
                .map(|o| ObstacleDocument {
                    id: Some(o.id.clone()),
                    center: o.center,
                    size: o.size,
                })
                .collect(),
            bounds: BoundsDocument {
                min: self.bounds.min.into(),
                max: self.bounds.max.into(),
            },
            radio: RadioDocument {
                frequency_mhz: self.radio.frequency_hz / 1e6,
                noise_floor_dbm: self.radio.noise_floor_dbm,
                max_tx_power_dbm: self.radio.max_tx_power_dbm,
                tx_power_step_db: Some(self.radio.tx_power_step_db),
            },
            mcs_table: Some(McsTableSource::Inline(self.mcs_table.to_document())),
            eval: Some(EvalDocument {
                tx_power_dbm: Some(self.eval_params.eval_tx_power_dbm),
                nlos_penalty_db: Some(self.eval_params.nlos_penalty_db),
                mac_efficiency: Some(self.eval_params.mac_efficiency),
                packet_size_bytes: Some(self.eval_params.packet_size_bytes),
                sharing: Some(self.eval_params.sharing),
            }),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("scenario document serializes")
    }

    /// Shifts UEs, obstacles and bounds by `v`.
    pub fn translated(&self, v: Point3) -> Self {
        let mut out = self.clone();
        for ue in &mut out.ues {
            ue.position = ue.position + v;
        }
        for o in &mut out.obstacles {
            o.center = [o.center[0] + v.x, o.center[1] + v.y];
            o.shape = o.shape.translated(v);
        }
        out.bounds = SearchBounds {
            min: self.bounds.min + v,
            max: self.bounds.max + v,
        };
        out
    }
}

/// Parses and validates a scenario document; a string-valued MCS table
/// path is resolved against the working directory.
pub fn load_scenario(document: &str) -> Result<Scenario> {
    Scenario::from_json_str(document, None)
}

fn table_diag(err: Error) -> Error {
    Error::Validation(vec![Diagnostic::new(DiagnosticCode::InvalidMcsTable, None, err.to_string())])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiagnosticCode {
    NoUes,
    DuplicateUeId,
    NonFiniteCoordinate,
    UeBelowGround,
    NonPositiveDemand,
    DemandExceedsMaxMcs,
    UeInsideObstacle,
    InvalidObstacle,
    DuplicateObstacleId,
    InvalidBounds,
    InvalidRadio,
    InvalidEvalParams,
    InvalidMcsTable,
}

impl DiagnosticCode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::NoUes => "NO_UES",
            Self::DuplicateUeId => "DUPLICATE_UE_ID",
            Self::NonFiniteCoordinate => "NON_FINITE_COORDINATE",
            Self::UeBelowGround => "UE_BELOW_GROUND",
            Self::NonPositiveDemand => "NON_POSITIVE_DEMAND",
            Self::DemandExceedsMaxMcs => "DEMAND_EXCEEDS_MAX_MCS",
            Self::UeInsideObstacle => "UE_INSIDE_OBSTACLE",
            Self::InvalidObstacle => "INVALID_OBSTACLE",
            Self::DuplicateObstacleId => "DUPLICATE_OBSTACLE_ID",
            Self::InvalidBounds => "INVALID_BOUNDS",
            Self::InvalidRadio => "INVALID_RADIO",
            Self::InvalidEvalParams => "INVALID_EVAL_PARAMS",
            Self::InvalidMcsTable => "INVALID_MCS_TABLE",
        }
    }
}

impl fmt::Display for DiagnosticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub code: DiagnosticCode,
    /// Offending UE or obstacle id, when the violation is tied to one.
    pub entity: Option<String>,
    pub message: String,
}

impl Diagnostic {
    fn new(code: DiagnosticCode, entity: Option<&str>, message: impl Into<String>) -> Self {
        Self {
            code,
            entity: entity.map(str::to_owned),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.entity {
            Some(id) => write!(f, "{} [{}]: {}", self.code, id, self.message),
            None => write!(f, "{}: {}", self.code, self.message),
        }
    }
}

/// Every invariant violation in `s`; empty when the scenario is usable.
pub fn validate(s: &Scenario) -> Vec<Diagnostic> {
    use DiagnosticCode as C;
    let mut out = Vec::new();

    if s.ues.is_empty() {
        out.push(Diagnostic::new(C::NoUes, None, "scenario has no user equipment"));
    }
    let mut seen = HashSet::new();
    for ue in &s.ues {
        let id = Some(ue.id.as_str());
        if !seen.insert(ue.id.as_str()) {
            out.push(Diagnostic::new(C::DuplicateUeId, id, "UE id is not unique"));
        }
        if !ue.position.is_finite() {
            out.push(Diagnostic::new(C::NonFiniteCoordinate, id, "UE position is not finite"));
            continue;
        }
        if ue.position.z < 0.0 {
            out.push(Diagnostic::new(C::UeBelowGround, id, format!("UE altitude {} m is below ground", ue.position.z)));
        }
        if !(ue.demand_bps > 0.0 && ue.demand_bps.is_finite()) {
            out.push(Diagnostic::new(
                C::NonPositiveDemand,
                id,
                format!("demand {} bit/s violates 0 < T_i", ue.demand_bps),
            ));
        } else if ue.demand_bps > s.mcs_table.max_rate_bps() {
            out.push(Diagnostic::new(
                C::DemandExceedsMaxMcs,
                id,
                format!(
                    "demand {} Mbit/s exceeds the highest MCS rate {} Mbit/s",
                    ue.demand_bps / 1e6,
                    s.mcs_table.max_rate_bps() / 1e6
                ),
            ));
        }
        for o in &s.obstacles {
            if o.shape.contains(&ue.position) {
                out.push(Diagnostic::new(
                    C::UeInsideObstacle,
                    id,
                    format!("UE lies inside obstacle {}", o.id),
                ));
            }
        }
    }

    let mut obstacle_ids = HashSet::new();
    for o in &s.obstacles {
        if !obstacle_ids.insert(o.id.as_str()) {
            out.push(Diagnostic::new(C::DuplicateObstacleId, Some(&o.id), "obstacle id is not unique"));
        }
    }

    if !s.bounds.is_valid() {
        out.push(Diagnostic::new(
            C::InvalidBounds,
            None,
            format!(
                "bounds {} .. {} must be finite, increasing on every axis, with min z >= 0",
                s.bounds.min, s.bounds.max
            ),
        ));
    }
    for v in s.radio.violations() {
        out.push(Diagnostic::new(C::InvalidRadio, None, v));
    }

    let e = &s.eval_params;
    if !(e.mac_efficiency > 0.0 && e.mac_efficiency <= 1.0) {
        out.push(Diagnostic::new(
            C::InvalidEvalParams,
            None,
            format!("MAC efficiency {} outside (0, 1]", e.mac_efficiency),
        ));
    }
    if !(e.nlos_penalty_db >= 0.0 && e.nlos_penalty_db.is_finite()) {
        out.push(Diagnostic::new(
            C::InvalidEvalParams,
            None,
            format!("NLoS penalty {} dB must be >= 0", e.nlos_penalty_db),
        ));
    }
    if !e.eval_tx_power_dbm.is_finite() {
        out.push(Diagnostic::new(C::InvalidEvalParams, None, "evaluator TX power is not finite"));
    }
    if e.packet_size_bytes == 0 {
        out.push(Diagnostic::new(C::InvalidEvalParams, None, "packet size must be > 0"));
    }
    out
}

// File format. Field order here is the canonical serialization order.

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDocument {
    pub ues: Vec<UeDocument>,
    #[serde(default)]
    pub obstacles: Vec<ObstacleDocument>,
    pub bounds: BoundsDocument,
    pub radio: RadioDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mcs_table: Option<McsTableSource>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eval: Option<EvalDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UeDocument {
    pub id: String,
    pub position: [f64; 3],
    pub demand_mbps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstacleDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub center: [f64; 2],
    pub size: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsDocument {
    pub min: [f64; 3],
    pub max: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadioDocument {
    pub frequency_mhz: f64,
    pub noise_floor_dbm: f64,
    pub max_tx_power_dbm: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tx_power_step_db: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum McsTableSource {
    Path(String),
    Inline(McsTableDocument),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tx_power_dbm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nlos_penalty_db: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mac_efficiency: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub packet_size_bytes: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sharing: Option<SharingPolicy>,
}

#[cfg(test)]
mod tests {
    use super::*;

    const SCENARIO_A: &str = r#"{
        "ues": [
            {"id": "UE1", "position": [0, -15, 1], "demand_mbps": 117},
            {"id": "UE2", "position": [0, 20, 1], "demand_mbps": 58.5}
        ],
        "obstacles": [{"id": "building", "center": [0, 0], "size": [10, 10, 20]}],
        "bounds": {"min": [-5, -30, 0], "max": [5, 30, 60]},
        "radio": {"frequency_mhz": 5250, "noise_floor_dbm": -85, "max_tx_power_dbm": 20}
    }"#;

    fn codes(err: Error) -> Vec<DiagnosticCode> {
        match err {
            Error::Validation(d) => d.into_iter().map(|d| d.code).collect(),
            other => panic!("expected validation error, got {other}"),
        }
    }

    #[test]
    fn loads_canonical_scenario_with_defaults() {
        let s = load_scenario(SCENARIO_A).unwrap();
        assert_eq!(s.ues.len(), 2);
        assert_eq!(s.ues[0].position, Point3::new(0.0, -15.0, 1.0));
        assert_eq!(s.ues[1].position, Point3::new(0.0, 20.0, 1.0));
        assert_eq!(s.ues[0].demand_bps, 117e6);
        assert_eq!(s.obstacles[0].shape.min_corner(), Point3::new(-5.0, -5.0, 0.0));
        assert_eq!(s.obstacles[0].shape.max_corner(), Point3::new(5.0, 5.0, 20.0));
        assert_eq!(s.radio.frequency_hz, 5.25e9);
        assert_eq!(s.radio.tx_power_step_db, 1.0);
        assert_eq!(s.eval_params, EvalParams::default());
        assert_eq!(s.mcs_table, McsTable::canonical());
        assert!(validate(&s).is_empty());
    }

    #[test]
    fn zero_demand_is_rejected() {
        let doc = SCENARIO_A.replace("\"demand_mbps\": 117", "\"demand_mbps\": 0");
        let err = load_scenario(&doc).unwrap_err();
        assert!(err.to_string().contains("0 < T_i"));
        assert_eq!(codes(err), vec![DiagnosticCode::NonPositiveDemand]);
    }

    #[test]
    fn ue_inside_building_is_flagged() {
        let mut s = load_scenario(SCENARIO_A).unwrap();
        s.ues[0].position = Point3::new(0.0, 0.0, 1.0);
        let diags = validate(&s);
        assert_eq!(diags.len(), 1);
        assert_eq!(diags[0].code, DiagnosticCode::UeInsideObstacle);
        assert_eq!(diags[0].entity.as_deref(), Some("UE1"));
    }

    #[test]
    fn oversized_demand_is_flagged() {
        let mut s = load_scenario(SCENARIO_A).unwrap();
        s.ues[1].demand_bps = 10e9;
        let diags = validate(&s);
        assert_eq!(diags.iter().map(|d| d.code).collect::<Vec<_>>(), vec![DiagnosticCode::DemandExceedsMaxMcs]);
        assert_eq!(diags[0].code.as_str(), "DEMAND_EXCEEDS_MAX_MCS");
    }

    #[test]
    fn structural_violations_are_reported() {
        let doc = SCENARIO_A
            .replace("\"UE2\"", "\"UE1\"")
            .replace("\"max\": [5, 30, 60]", "\"max\": [-5, 30, 60]")
            .replace("\"size\": [10, 10, 20]", "\"size\": [10, 0, 20]");
        let got = codes(load_scenario(&doc).unwrap_err());
        assert!(got.contains(&DiagnosticCode::DuplicateUeId));
        assert!(got.contains(&DiagnosticCode::InvalidBounds));
        assert!(got.contains(&DiagnosticCode::InvalidObstacle));
    }

    #[test]
    fn eval_and_radio_violations() {
        let mut s = load_scenario(SCENARIO_A).unwrap();
        s.eval_params.mac_efficiency = 0.0;
        s.eval_params.nlos_penalty_db = -1.0;
        s.radio.tx_power_step_db = 0.0;
        let got: Vec<_> = validate(&s).into_iter().map(|d| d.code).collect();
        assert_eq!(
            got,
            vec![
                DiagnosticCode::InvalidRadio,
                DiagnosticCode::InvalidEvalParams,
                DiagnosticCode::InvalidEvalParams
            ]
        );
    }

    #[test]
    fn malformed_documents_are_parse_errors() {
        assert!(matches!(load_scenario("{"), Err(Error::Parse(_))));
        assert!(matches!(load_scenario("{\"ues\": []}"), Err(Error::Parse(_))));
        let unknown = SCENARIO_A.replace("\"radio\"", "\"radio_typo\"");
        assert!(matches!(load_scenario(&unknown), Err(Error::Parse(_))));
    }

    #[test]
    fn no_ues_is_flagged() {
        let doc = r#"{"ues": [], "bounds": {"min": [0,0,0], "max": [1,1,1]},
            "radio": {"frequency_mhz": 5250, "noise_floor_dbm": -85, "max_tx_power_dbm": 20}}"#;
        assert_eq!(codes(load_scenario(doc).unwrap_err()), vec![DiagnosticCode::NoUes]);
    }

    #[test]
    fn inline_and_path_tables() {
        let table = McsTable::canonical();
        let inline = SCENARIO_A.replace(
            "\"radio\"",
            &format!(
                "\"mcs_table\": {}, \"radio\"",
                serde_json::to_string(&table.to_document()).unwrap()
            ),
        );
        assert_eq!(load_scenario(&inline).unwrap().mcs_table, table);

        let dir = std::env::temp_dir().join(format!("topa-scenario-test-{}", std::process::id()));
        fs::create_dir_all(&dir).unwrap();
        fs::write(
            dir.join("table.json"),
            r#"{"description": "tiny", "entries": [{"index": 0, "phy_rate_mbps": 10, "min_snr_db": 3}]}"#,
        )
        .unwrap();
        let with_path = SCENARIO_A
            .replace("\"radio\"", "\"mcs_table\": \"table.json\", \"radio\"")
            .replace("117", "5")
            .replace("58.5", "5");
        let s = Scenario::from_json_str(&with_path, Some(&dir)).unwrap();
        assert_eq!(s.mcs_table.entries().len(), 1);
        assert!(Scenario::from_json_str(&with_path, Some(Path::new("/nonexistent"))).is_err());
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn serialization_round_trips() {
        let s = load_scenario(SCENARIO_A).unwrap();
        let text = s.to_json_string();
        let again = load_scenario(&text).unwrap();
        assert_eq!(s, again);
        assert_eq!(text, again.to_json_string());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            // Demands on a 1/4 Mbit/s lattice and dyadic coordinates convert
            // between file and SI units without rounding.
            #[test]
            fn load_serialize_load(
                quarter_mbps in prop::collection::vec(1u32..3000, 1..5),
                coords in prop::collection::vec((-64i32..64, -64i32..64, 0i32..16), 5),
                step_eighths in 1u32..16,
                eff_pct in 1u32..=100,
            ) {
                let ues: Vec<String> = quarter_mbps.iter().enumerate().map(|(i, q)| {
                    let (x, y, z) = coords[i];
                    format!(r#"{{"id": "u{i}", "position": [{}, {}, {}], "demand_mbps": {}}}"#,
                        x as f64 * 0.5 + 30.0, y as f64 * 0.5, z as f64 * 0.25, *q as f64 * 0.25)
                }).collect();
                let doc = format!(
                    r#"{{"ues": [{}], "obstacles": [{{"center": [-30.5, -1.25], "size": [6.5, 4, 12.75]}}],
                    "bounds": {{"min": [-40, -40, 0], "max": [80, 40, 50]}},
                    "radio": {{"frequency_mhz": 2412, "noise_floor_dbm": -90.5, "max_tx_power_dbm": 23, "tx_power_step_db": {}}},
                    "eval": {{"mac_efficiency": {}}}}}"#,
                    ues.join(","), step_eighths as f64 / 8.0, eff_pct as f64 / 100.0);
                let first = load_scenario(&doc).unwrap();
                let second = load_scenario(&first.to_json_string()).unwrap();
                prop_assert_eq!(&first, &second);
                prop_assert_eq!(first.to_json_string(), second.to_json_string());
            }
        }
    }
}
