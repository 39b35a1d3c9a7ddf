//! Desk-scale network evaluation of candidate UAV positions.
//!
//! Each UE link gets a channel state from the LoS test, an SNR from the
//! free-space budget (minus a fixed penalty when obstructed), an MCS from
//! ideal rate adaptation and a MAC-level capacity `efficiency * PHY rate`.
//! The links then share one channel: flow `i` needs airtime
//! `demand_i / capacity_i`, and when the total exceeds 1 the flows are
//! scaled back according to the scenario's sharing policy.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{has_los, Point3};
use crate::radio::{nlos_snr_db, snr_db, McsEntry};
use crate::scenario::{Scenario, SharingPolicy, UserEquipment};

#[derive(Debug, Clone, PartialEq)]
pub struct LinkReport {
    pub ue_id: String,
    pub distance_m: f64,
    pub los: bool,
    pub snr_db: f64,
    pub mcs: Option<McsEntry>,
    pub capacity_bps: f64,
    pub demand_bps: f64,
    pub served_bps: f64,
    pub airtime: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PositionReport {
    pub name: String,
    pub position: Point3,
    pub links: Vec<LinkReport>,
    pub aggregate_bps: f64,
    pub airtime_used: f64,
}

/// Channel state and capacity of one UE link at the evaluator's power.
///
/// `served_bps` here is the single-link view, `min(demand, capacity)`;
/// [`aggregate_throughput`] replaces it with the shared-channel value.
pub fn link_report(ue: &UserEquipment, uav: Point3, s: &Scenario) -> Result<LinkReport> {
    let params = &s.eval_params;
    let distance = ue.position.distance(&uav);
    let los = has_los(ue.position, uav, &s.boxes())?;
    let snr = if los {
        snr_db(params.eval_tx_power_dbm, distance, &s.radio)?
    } else {
        nlos_snr_db(params.eval_tx_power_dbm, distance, &s.radio, params.nlos_penalty_db)?
    };
    let mcs = s.mcs_table.mcs_from_snr(snr);
    let capacity = mcs.map_or(0.0, |m| params.mac_efficiency * m.phy_rate_bps);
    let served = ue.demand_bps.min(capacity);
    Ok(LinkReport {
        ue_id: ue.id.clone(),
        distance_m: distance,
        los,
        snr_db: snr,
        mcs,
        capacity_bps: capacity,
        demand_bps: ue.demand_bps,
        served_bps: served,
        airtime: if capacity > 0.0 { served / capacity } else { 0.0 },
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sharing {
    pub served_bps: Vec<f64>,
    pub airtime: Vec<f64>,
    pub airtime_used: f64,
}

/// Splits one channel among flows. Links with zero capacity serve nothing
/// and use no airtime.
pub fn share_airtime(demands: &[f64], capacities: &[f64], policy: SharingPolicy) -> Sharing {
    assert_eq!(demands.len(), capacities.len());
    let need: Vec<f64> = demands
        .iter()
        .zip(capacities)
        .map(|(d, c)| if *c > 0.0 { d / c } else { 0.0 })
        .collect();
    let offered: f64 = need.iter().sum();

    let airtime = if offered <= 1.0 {
        need
    } else {
        match policy {
            SharingPolicy::Proportional => need.iter().map(|a| a / offered).collect(),
            SharingPolicy::EqualAirtime => water_fill(&need, capacities),
        }
    };
    let served_bps = airtime.iter().zip(capacities).map(|(a, c)| a * c).collect();
    Sharing {
        served_bps,
        airtime_used: airtime.iter().sum(),
        airtime,
    }
}

fn water_fill(need: &[f64], capacities: &[f64]) -> Vec<f64> {
    let mut granted = vec![0.0; need.len()];
    let mut open: Vec<usize> = (0..need.len()).filter(|&i| capacities[i] > 0.0).collect();
    let mut remaining = 1.0;
    while !open.is_empty() {
        let share = remaining / open.len() as f64;
        let (satisfied, hungry): (Vec<usize>, Vec<usize>) = open.iter().partition(|&&i| need[i] <= share);
        if satisfied.is_empty() {
            for i in hungry {
                granted[i] = share;
            }
            break;
        }
        for i in satisfied {
            granted[i] = need[i];
            remaining -= need[i];
        }
        open = hungry;
    }
    granted
}

pub fn aggregate_throughput(uav: Point3, s: &Scenario) -> Result<PositionReport> {
    let links = s
        .ues
        .iter()
        .map(|ue| link_report(ue, uav, s))
        .collect::<Result<Vec<_>>>()?;
    let demands: Vec<f64> = links.iter().map(|l| l.demand_bps).collect();
    Ok(apply_sharing(String::new(), uav, links, &demands, s.eval_params.sharing))
}

fn apply_sharing(
    name: String,
    position: Point3,
    mut links: Vec<LinkReport>,
    demands: &[f64],
    policy: SharingPolicy,
) -> PositionReport {
    let capacities: Vec<f64> = links.iter().map(|l| l.capacity_bps).collect();
    let sharing = share_airtime(demands, &capacities, policy);
    for ((link, served), airtime) in links.iter_mut().zip(&sharing.served_bps).zip(&sharing.airtime) {
        link.served_bps = *served;
        link.airtime = *airtime;
    }
    PositionReport {
        name,
        position,
        aggregate_bps: sharing.served_bps.iter().sum(),
        airtime_used: sharing.airtime_used,
        links,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedPosition {
    pub name: String,
    pub position: Point3,
}

/// Candidate positions file: `{"positions": [{"name", "position": [x, y, z]}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PositionsDocument {
    pub positions: Vec<NamedPosition>,
}

impl PositionsDocument {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: Self = serde_json::from_str(text)?;
        if doc.positions.is_empty() {
            return Err(Error::Parse("positions list is empty".into()));
        }
        if let Some(p) = doc.positions.iter().find(|p| !p.position.is_finite()) {
            return Err(Error::Parse(format!("position {} is not finite", p.name)));
        }
        Ok(doc)
    }
}

/// One report per candidate, in input order.
pub fn compare_positions(positions: &[NamedPosition], s: &Scenario) -> Result<Vec<PositionReport>> {
    positions
        .par_iter()
        .map(|p| {
            let mut report = aggregate_throughput(p.position, s)?;
            report.name = p.name.clone();
            Ok(report)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSample {
    pub t_s: u32,
    pub aggregate_bps: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CcdfPoint {
    pub throughput_bps: f64,
    /// Fraction of samples at or above `throughput_bps`.
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub samples: Vec<TraceSample>,
    pub ccdf: Vec<CcdfPoint>,
}

impl Trace {
    pub fn mean_bps(&self) -> f64 {
        self.samples.iter().map(|s| s.aggregate_bps).sum::<f64>() / self.samples.len() as f64
    }
}

/// Per-second aggregate throughput with demands perturbed by independent
/// multiplicative noise, uniform in `[1 - jitter, 1 + jitter]`.
///
/// The noise stream depends only on `seed` and the UE count, so every
/// position evaluated with the same seed sees the same demand sequence.
pub fn throughput_trace(uav: Point3, s: &Scenario, duration_s: u32, jitter: f64, seed: u64) -> Result<Trace> {
    if duration_s == 0 {
        return Err(Error::InvalidTrace("trace duration must be at least 1 s".into()));
    }
    if !(0.0..1.0).contains(&jitter) {
        return Err(Error::InvalidTrace(format!("jitter {jitter} outside [0, 1)")));
    }
    let links = s
        .ues
        .iter()
        .map(|ue| link_report(ue, uav, s))
        .collect::<Result<Vec<_>>>()?;
    let base: Vec<f64> = links.iter().map(|l| l.demand_bps).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(duration_s as usize);
    let mut demands = base.clone();
    for t in 1..=duration_s {
        if jitter > 0.0 {
            for (d, b) in demands.iter_mut().zip(&base) {
                *d = b * rng.gen_range(1.0 - jitter..=1.0 + jitter);
            }
        }
        let report = apply_sharing(String::new(), uav, links.clone(), &demands, s.eval_params.sharing);
        samples.push(TraceSample {
            t_s: t,
            aggregate_bps: report.aggregate_bps,
        });
    }
    let values: Vec<f64> = samples.iter().map(|s| s.aggregate_bps).collect();
    Ok(Trace {
        ccdf: ccdf(&values),
        samples,
    })
}

/// Empirical CCDF as `(value, fraction >= value)` at each distinct value.
pub fn ccdf(values: &[f64]) -> Vec<CcdfPoint> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut out: Vec<CcdfPoint> = Vec::new();
    for (i, v) in sorted.iter().enumerate() {
        if out.last().is_some_and(|p| p.throughput_bps == *v) {
            continue;
        }
        out.push(CcdfPoint {
            throughput_bps: *v,
            fraction: (sorted.len() - i) as f64 / n,
        });
    }
    out
}

fn mbps(bps: f64) -> String {
    format!("{:.6}", bps / 1e6)
}

/// `position,x,y,z,served_mbps_<ue>...,aggregate_mbps,airtime_used`
pub fn write_summary_csv<W: Write>(out: W, reports: &[PositionReport], s: &Scenario) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["position".to_string(), "x".into(), "y".into(), "z".into()];
    header.extend(s.ues.iter().map(|u| format!("served_mbps_{}", u.id)));
    header.push("aggregate_mbps".into());
    header.push("airtime_used".into());
    w.write_record(&header)?;
    for r in reports {
        let mut row = vec![
            r.name.clone(),
            format!("{:.6}", r.position.x),
            format!("{:.6}", r.position.y),
            format!("{:.6}", r.position.z),
        ];
        row.extend(r.links.iter().map(|l| mbps(l.served_bps)));
        row.push(mbps(r.aggregate_bps));
        row.push(format!("{:.6}", r.airtime_used));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// `position,t,aggregate_mbps`
pub fn write_trace_csv<W: Write>(out: W, traces: &[(&str, &Trace)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["position", "t", "aggregate_mbps"])?;
    for (name, trace) in traces {
        for s in &trace.samples {
            w.write_record([name.to_string(), s.t_s.to_string(), mbps(s.aggregate_bps)])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// `position,throughput_mbps,ccdf`
pub fn write_ccdf_csv<W: Write>(out: W, traces: &[(&str, &Trace)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["position", "throughput_mbps", "ccdf"])?;
    for (name, trace) in traces {
        for p in &trace.ccdf {
            w.write_record([name.to_string(), mbps(p.throughput_bps), format!("{:.6}", p.fraction)])?;
        }
    }
    w.flush()?;
    Ok(())
}
