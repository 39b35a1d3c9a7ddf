//! Free-space link budget and MCS lookup.
//!
//! All powers are in dBm, gains and losses in dB, antenna gains 0 dBi.
//! The link budget is
//!
//! ```text
//! SNR = P_T - 20 log10(d) - 20 log10(f) - 20 log10(4 pi / c) - P_N
//!     = P_T + K - 20 log10(d)
//! ```
//!
//! so a minimum SNR turns into a maximum link distance
//! `10^((K + P_T - SNR_min) / 20)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT_M_S: f64 = 299_792_458.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadioConfig {
    pub frequency_hz: f64,
    pub noise_floor_dbm: f64,
    pub max_tx_power_dbm: f64,
    pub tx_power_step_db: f64,
}

impl RadioConfig {
    pub const DEFAULT_TX_POWER_STEP_DB: f64 = 1.0;

    /// Human-readable invariant violations, empty when valid.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.frequency_hz.is_finite() && (1e8..=1e11).contains(&self.frequency_hz)) {
            out.push(format!("frequency {} Hz outside [1e8, 1e11]", self.frequency_hz));
        }
        if !self.noise_floor_dbm.is_finite() {
            out.push("noise floor is not finite".to_string());
        }
        if !(self.max_tx_power_dbm.is_finite() && self.max_tx_power_dbm >= 0.0) {
            out.push(format!("maximum TX power {} dBm must be finite and >= 0", self.max_tx_power_dbm));
        }
        if !(self.tx_power_step_db.is_finite() && self.tx_power_step_db > 0.0) {
            out.push(format!("TX power step {} dB must be > 0", self.tx_power_step_db));
        }
        out
    }

    /// Power levels visited by the sweep: 0, step, 2 step, ... up to the maximum.
    pub fn power_levels(&self) -> Vec<f64> {
        let mut levels = Vec::new();
        let mut k = 0u32;
        loop {
            let p = f64::from(k) * self.tx_power_step_db;
            if p > self.max_tx_power_dbm + 1e-9 {
                break;
            }
            levels.push(p);
            k += 1;
        }
        levels
    }
}

/// Aggregated link-budget constant K in dB.
pub fn k_constant(cfg: &RadioConfig) -> f64 {
    -20.0 * cfg.frequency_hz.log10() - 20.0 * (4.0 * PI / SPEED_OF_LIGHT_M_S).log10() - cfg.noise_floor_dbm
}

pub fn snr_db(tx_power_dbm: f64, distance_m: f64, cfg: &RadioConfig) -> Result<f64> {
    if distance_m.is_nan() || distance_m <= 0.0 {
        return Err(Error::NonPositiveDistance(distance_m));
    }
    Ok(tx_power_dbm + k_constant(cfg) - 20.0 * distance_m.log10())
}

/// NLoS link modeled as free space minus a fixed penalty.
pub fn nlos_snr_db(tx_power_dbm: f64, distance_m: f64, cfg: &RadioConfig, penalty_db: f64) -> Result<f64> {
    Ok(snr_db(tx_power_dbm, distance_m, cfg)? - penalty_db)
}

/// Largest distance at which the link still reaches `min_snr_db`.
pub fn max_distance_m(tx_power_dbm: f64, min_snr_db: f64, cfg: &RadioConfig) -> f64 {
    10f64.powf((k_constant(cfg) + tx_power_dbm - min_snr_db) / 20.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McsEntry {
    pub index: u32,
    pub phy_rate_bps: f64,
    pub min_snr_db: f64,
}

/// MCS ladder for one PHY configuration, sorted by index with strictly
/// increasing rate and SNR threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct McsTable {
    description: String,
    entries: Vec<McsEntry>,
}

/// On-disk form of an [`McsTable`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McsTableDocument {
    pub description: String,
    pub entries: Vec<McsEntryDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McsEntryDocument {
    pub index: u32,
    pub phy_rate_mbps: f64,
    pub min_snr_db: f64,
}

const CANONICAL_TABLE: &str = include_str!("../data/mcs_vht160_gi800_1ss.json");

impl McsTable {
    pub fn new(description: impl Into<String>, entries: Vec<McsEntry>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidMcsTable("table has no entries".into()));
        }
        for e in &entries {
            if !(e.phy_rate_bps.is_finite() && e.phy_rate_bps > 0.0) || !e.min_snr_db.is_finite() {
                return Err(Error::InvalidMcsTable(format!("entry {} has invalid rate or threshold", e.index)));
            }
        }
        for pair in entries.windows(2) {
            let (lo, hi) = (&pair[0], &pair[1]);
            if !(lo.index < hi.index && lo.phy_rate_bps < hi.phy_rate_bps && lo.min_snr_db < hi.min_snr_db) {
                return Err(Error::InvalidMcsTable(format!(
                    "entries {} and {} are not strictly increasing in index, rate and SNR",
                    lo.index, hi.index
                )));
            }
        }
        Ok(Self {
            description: description.into(),
            entries,
        })
    }

    /// VHT 160 MHz, GI 800 ns, one spatial stream.
    pub fn canonical() -> Self {
        Self::from_json_str(CANONICAL_TABLE).expect("bundled MCS table is valid")
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: McsTableDocument = serde_json::from_str(text)?;
        Self::from_document(doc)
    }

    pub fn from_document(doc: McsTableDocument) -> Result<Self> {
        let entries = doc
            .entries
            .into_iter()
            .map(|e| McsEntry {
                index: e.index,
                phy_rate_bps: e.phy_rate_mbps * 1e6,
                min_snr_db: e.min_snr_db,
            })
            .collect();
        Self::new(doc.description, entries)
    }

    pub fn to_document(&self) -> McsTableDocument {
        McsTableDocument {
            description: self.description.clone(),
            entries: self
                .entries
                .iter()
                .map(|e| McsEntryDocument {
                    index: e.index,
                    phy_rate_mbps: e.phy_rate_bps / 1e6,
                    min_snr_db: e.min_snr_db,
                })
                .collect(),
        }
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn entries(&self) -> &[McsEntry] {
        &self.entries
    }

    pub fn max_rate_bps(&self) -> f64 {
        self.entries.last().map_or(0.0, |e| e.phy_rate_bps)
    }

    /// Lowest-rate entry able to carry `demand_bps`.
    pub fn required_mcs(&self, demand_bps: f64) -> Result<McsEntry> {
        if demand_bps.is_nan() || demand_bps <= 0.0 {
            return Err(Error::NonPositiveDemand(demand_bps));
        }
        self.entries
            .iter()
            .find(|e| e.phy_rate_bps >= demand_bps)
            .copied()
            .ok_or(Error::DemandExceedsTable {
                demand_bps,
                max_rate_bps: self.max_rate_bps(),
            })
    }

    /// Highest entry whose threshold the measured SNR meets (ideal rate
    /// adaptation). `None` means the link is down.
    pub fn mcs_from_snr(&self, snr_db: f64) -> Option<McsEntry> {
        self.entries.iter().rev().find(|e| e.min_snr_db <= snr_db).copied()
    }
}
