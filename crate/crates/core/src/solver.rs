//! Minimal-power UAV placement.
//!
//! At a given transmit power every UE's required MCS fixes a minimum SNR and
//! hence a maximum link distance, so the admissible region is the
//! intersection of the UEs' demand spheres, clipped to the search bounds and
//! restricted to points with line of sight to every UE. The sweep raises the
//! power from 0 dBm in fixed steps and stops at the first level whose region
//! contains a lattice point.
//!
//! Within a power level the granted capacity is fixed by the demands, so
//! points are ranked by the sum of squared link distances. The best lattice
//! point is polished with a derivative-free pattern search that only accepts
//! feasible moves.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{has_los, BoxObstacle, Point3};
use crate::radio::{max_distance_m, snr_db, McsEntry};
use crate::scenario::{Scenario, SearchBounds};

/// Upper limit on lattice points in one sampling request.
pub const MAX_GRID_POINTS: u128 = 100_000_000;

const LATTICE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct UeRequirement {
    pub ue_id: String,
    pub mcs: McsEntry,
    pub min_snr_db: f64,
    pub d_max_m: f64,
}

/// Per-UE link requirements at one transmit power.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityContext {
    pub tx_power_dbm: f64,
    pub requirements: Vec<UeRequirement>,
}

pub fn build_context(s: &Scenario, tx_power_dbm: f64) -> Result<FeasibilityContext> {
    if !(0.0..=s.radio.max_tx_power_dbm).contains(&tx_power_dbm) {
        return Err(Error::TxPowerOutOfRange {
            tx_power_dbm,
            max_tx_power_dbm: s.radio.max_tx_power_dbm,
        });
    }
    let requirements = s
        .ues
        .iter()
        .map(|ue| {
            let mcs = s.mcs_table.required_mcs(ue.demand_bps)?;
            Ok(UeRequirement {
                ue_id: ue.id.clone(),
                mcs,
                min_snr_db: mcs.min_snr_db,
                d_max_m: max_distance_m(tx_power_dbm, mcs.min_snr_db, &s.radio),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FeasibilityContext {
        tx_power_dbm,
        requirements,
    })
}

/// Bounds, range and LoS check for a candidate UAV position.
pub fn is_feasible(p: Point3, ctx: &FeasibilityContext, s: &Scenario) -> bool {
    Checker::new(ctx, s).feasible(&p)
}

struct Checker {
    bounds: SearchBounds,
    ues: Vec<Point3>,
    d_max: Vec<f64>,
    boxes: Vec<BoxObstacle>,
}

impl Checker {
    fn new(ctx: &FeasibilityContext, s: &Scenario) -> Self {
        Self {
            bounds: s.bounds,
            ues: s.ues.iter().map(|u| u.position).collect(),
            d_max: ctx.requirements.iter().map(|r| r.d_max_m).collect(),
            boxes: s.boxes(),
        }
    }

    fn in_range(&self, p: &Point3) -> bool {
        self.ues.iter().zip(&self.d_max).all(|(ue, r)| p.distance(ue) <= *r)
    }

    fn los(&self, ue: usize, p: &Point3) -> bool {
        has_los(self.ues[ue], *p, &self.boxes).unwrap_or(false)
    }

    fn feasible(&self, p: &Point3) -> bool {
        self.bounds.contains(p) && self.in_range(p) && (0..self.ues.len()).all(|i| self.los(i, p))
    }
}

/// Regular lattice anchored at the lower bounds corner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    origin: Point3,
    resolution: f64,
    counts: [usize; 3],
}

impl Grid {
    pub fn over_bounds(bounds: &SearchBounds, resolution_m: f64) -> Result<Self> {
        if !(resolution_m > 0.0 && resolution_m.is_finite()) {
            return Err(Error::InvalidResolution(resolution_m));
        }
        let mut counts = [0usize; 3];
        let mut total: u128 = 1;
        for (k, count) in counts.iter_mut().enumerate() {
            let span = bounds.max.axis(k) - bounds.min.axis(k);
            let steps = (span / resolution_m + LATTICE_SLACK).floor();
            if steps >= MAX_GRID_POINTS as f64 {
                return Err(Error::GridTooLarge {
                    points: u128::MAX,
                    limit: MAX_GRID_POINTS,
                });
            }
            *count = steps as usize + 1;
            total = total.saturating_mul(*count as u128);
        }
        if total > MAX_GRID_POINTS {
            return Err(Error::GridTooLarge {
                points: total,
                limit: MAX_GRID_POINTS,
            });
        }
        Ok(Self {
            origin: bounds.min,
            resolution: resolution_m,
            counts,
        })
    }

    pub fn len(&self) -> usize {
        self.counts.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn counts(&self) -> [usize; 3] {
        self.counts
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn point(&self, i: usize, j: usize, k: usize) -> Point3 {
        Point3::new(
            self.origin.x + i as f64 * self.resolution,
            self.origin.y + j as f64 * self.resolution,
            self.origin.z + k as f64 * self.resolution,
        )
    }

    /// Inclusive index range of lattice points along `axis` within [lo, hi].
    fn index_range(&self, axis: usize, lo: f64, hi: f64) -> Option<(usize, usize)> {
        let o = self.origin.axis(axis);
        let first = ((lo - o) / self.resolution - LATTICE_SLACK).ceil().max(0.0);
        let last = ((hi - o) / self.resolution + LATTICE_SLACK)
            .floor()
            .min((self.counts[axis] - 1) as f64);
        (first <= last).then_some((first as usize, last as usize))
    }
}

/// Every lattice point of the bounds box that is feasible under `ctx`, in
/// x-major, then y, then z order.
pub fn sample_feasible_region(ctx: &FeasibilityContext, s: &Scenario, resolution_m: f64) -> Result<Vec<Point3>> {
    let grid = Grid::over_bounds(&s.bounds, resolution_m)?;
    let checker = Checker::new(ctx, s);
    let [nx, ny, nz] = grid.counts();
    let slabs: Vec<Vec<Point3>> = (0..nx)
        .into_par_iter()
        .map(|i| {
            let mut out = Vec::new();
            for j in 0..ny {
                for k in 0..nz {
                    let p = grid.point(i, j, k);
                    if checker.feasible(&p) {
                        out.push(p);
                    }
                }
            }
            out
        })
        .collect();
    Ok(slabs.into_iter().flatten().collect())
}

/// Smallest swept power with a non-empty sampled region, by exhaustive
/// lattice scan.
pub fn min_power_bruteforce(s: &Scenario, resolution_m: f64) -> Result<Option<f64>> {
    for p in s.radio.power_levels() {
        let ctx = build_context(s, p)?;
        if !sample_feasible_region(&ctx, s, resolution_m)?.is_empty() {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub grid_resolution_m: f64,
    pub initial_step_m: f64,
    pub final_step_m: f64,
    pub max_refinement_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            grid_resolution_m: 1.0,
            initial_step_m: 0.5,
            final_step_m: 1e-3,
            max_refinement_iterations: 100_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UeDiagnostics {
    pub ue_id: String,
    pub distance_m: f64,
    pub d_max_m: f64,
    pub snr_db: f64,
    pub min_snr_db: f64,
    pub snr_margin_db: f64,
    pub mcs_index: u32,
    pub granted_capacity_bps: f64,
    pub los: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverMetadata {
    pub grid_resolution_m: f64,
    pub power_levels_tried: usize,
    pub coarse_candidates: usize,
    pub coarse_position: Point3,
    pub coarse_sum_sq_distance_m2: f64,
    pub refinement_iterations: usize,
    pub final_step_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solution {
    pub tx_power_dbm: f64,
    pub position: Point3,
    pub ues: Vec<UeDiagnostics>,
    /// Sum of granted link capacities, bit/s.
    pub objective_bps: f64,
    /// Tie-break value: sum of squared UE distances, m².
    pub sum_sq_distance_m2: f64,
    pub metadata: SolverMetadata,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerLevelStats {
    pub tx_power_dbm: f64,
    /// UEs whose demand sphere does not reach the bounds box.
    pub unreachable_ues: usize,
    /// Lattice points inside the bounds and every demand sphere.
    pub range_candidates: usize,
    /// UEs without line of sight from any range candidate.
    pub los_blocked_ues: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InfeasibilityReport {
    pub levels: Vec<PowerLevelStats>,
}

impl fmt::Display for InfeasibilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.levels {
            writeln!(
                f,
                "P_T={:>6.2} dBm  unreachable_ues={}  range_candidates={}  los_blocked_ues={}",
                l.tx_power_dbm, l.unreachable_ues, l.range_candidates, l.los_blocked_ues
            )?;
        }
        Ok(())
    }
}

pub fn solve_position(s: &Scenario) -> Result<Solution> {
    solve_position_with(s, &SolverOptions::default())
}

pub fn solve_position_with(s: &Scenario, opts: &SolverOptions) -> Result<Solution> {
    for ue in &s.ues {
        s.mcs_table.required_mcs(ue.demand_bps)?;
    }
    let grid = Grid::over_bounds(&s.bounds, opts.grid_resolution_m)?;

    let mut stats = Vec::new();
    for (tried, power) in s.radio.power_levels().into_iter().enumerate() {
        let ctx = build_context(s, power)?;
        let checker = Checker::new(&ctx, s);
        let scan = scan_sphere_intersection(&grid, &checker);
        let Some((best, best_cost)) = scan.best else {
            stats.push(PowerLevelStats {
                tx_power_dbm: power,
                unreachable_ues: unreachable_ues(&checker, &s.bounds),
                range_candidates: scan.range_candidates,
                los_blocked_ues: scan.blocked_everywhere,
            });
            continue;
        };

        let (position, iterations, final_step) = refine(best, &checker, opts);
        let ues = diagnostics(position, &ctx, s, &checker);
        return Ok(Solution {
            tx_power_dbm: power,
            position,
            objective_bps: ctx.requirements.iter().map(|r| r.mcs.phy_rate_bps).sum(),
            sum_sq_distance_m2: sum_sq(&position, &checker.ues),
            ues,
            metadata: SolverMetadata {
                grid_resolution_m: opts.grid_resolution_m,
                power_levels_tried: tried + 1,
                coarse_candidates: scan.feasible,
                coarse_position: best,
                coarse_sum_sq_distance_m2: best_cost,
                refinement_iterations: iterations,
                final_step_m: final_step,
            },
        });
    }
    Err(Error::Infeasible(InfeasibilityReport { levels: stats }))
}

struct ScanResult {
    best: Option<(Point3, f64)>,
    feasible: usize,
    range_candidates: usize,
    blocked_everywhere: usize,
}

#[derive(Default)]
struct SlabTally {
    best: Option<(Point3, f64)>,
    feasible: usize,
    range_candidates: usize,
    clear_somewhere: Vec<bool>,
}

/// Scans only the lattice points inside the bounding box of the sphere
/// intersection.
fn scan_sphere_intersection(grid: &Grid, checker: &Checker) -> ScanResult {
    let n_ues = checker.ues.len();
    let mut ranges = [(0usize, 0usize); 3];
    for (axis, range) in ranges.iter_mut().enumerate() {
        let lo = checker
            .ues
            .iter()
            .zip(&checker.d_max)
            .map(|(u, r)| u.axis(axis) - r)
            .fold(checker.bounds.min.axis(axis), f64::max);
        let hi = checker
            .ues
            .iter()
            .zip(&checker.d_max)
            .map(|(u, r)| u.axis(axis) + r)
            .fold(checker.bounds.max.axis(axis), f64::min);
        match grid.index_range(axis, lo, hi) {
            Some(r) => *range = r,
            None => {
                return ScanResult {
                    best: None,
                    feasible: 0,
                    range_candidates: 0,
                    blocked_everywhere: 0,
                }
            }
        }
    }

    let tallies: Vec<SlabTally> = (ranges[0].0..=ranges[0].1)
        .into_par_iter()
        .map(|i| {
            let mut tally = SlabTally {
                clear_somewhere: vec![false; n_ues],
                ..Default::default()
            };
            for j in ranges[1].0..=ranges[1].1 {
                for k in ranges[2].0..=ranges[2].1 {
                    let p = grid.point(i, j, k);
                    if !checker.in_range(&p) {
                        continue;
                    }
                    tally.range_candidates += 1;
                    let mut all_clear = true;
                    for u in 0..n_ues {
                        if checker.los(u, &p) {
                            tally.clear_somewhere[u] = true;
                        } else {
                            all_clear = false;
                        }
                    }
                    if all_clear {
                        tally.feasible += 1;
                        let cost = sum_sq(&p, &checker.ues);
                        if tally.best.is_none_or(|(_, c)| cost < c) {
                            tally.best = Some((p, cost));
                        }
                    }
                }
            }
            tally
        })
        .collect();

    let mut result = ScanResult {
        best: None,
        feasible: 0,
        range_candidates: 0,
        blocked_everywhere: 0,
    };
    let mut clear = vec![false; n_ues];
    // Slabs arrive in x order, so strict improvement keeps the first minimum.
    for t in tallies {
        result.feasible += t.feasible;
        result.range_candidates += t.range_candidates;
        for (c, s) in clear.iter_mut().zip(&t.clear_somewhere) {
            *c |= *s;
        }
        if let Some((p, cost)) = t.best {
            if result.best.is_none_or(|(_, c)| cost < c) {
                result.best = Some((p, cost));
            }
        }
    }
    if result.range_candidates > 0 {
        result.blocked_everywhere = clear.iter().filter(|c| !**c).count();
    }
    result
}

fn unreachable_ues(checker: &Checker, bounds: &SearchBounds) -> usize {
    checker
        .ues
        .iter()
        .zip(&checker.d_max)
        .filter(|(ue, r)| {
            let nearest = Point3::new(
                ue.x.clamp(bounds.min.x, bounds.max.x),
                ue.y.clamp(bounds.min.y, bounds.max.y),
                ue.z.clamp(bounds.min.z, bounds.max.z),
            );
            nearest.distance(ue) > **r
        })
        .count()
}

fn sum_sq(p: &Point3, ues: &[Point3]) -> f64 {
    ues.iter().map(|u| p.distance_sq(u)).sum()
}

/// Pattern search over the 26 lattice directions with step halving.
fn refine(start: Point3, checker: &Checker, opts: &SolverOptions) -> (Point3, usize, f64) {
    let mut directions = Vec::with_capacity(26);
    for dx in -1i32..=1 {
        for dy in -1i32..=1 {
            for dz in -1i32..=1 {
                if (dx, dy, dz) != (0, 0, 0) {
                    directions.push(Point3::new(dx as f64, dy as f64, dz as f64));
                }
            }
        }
    }

    let mut current = start;
    let mut cost = sum_sq(&current, &checker.ues);
    let mut step = opts.initial_step_m;
    let mut iterations = 0;
    while step >= opts.final_step_m && iterations < opts.max_refinement_iterations {
        iterations += 1;
        let mut best_move: Option<(Point3, f64)> = None;
        for d in &directions {
            let candidate = Point3::new(current.x + d.x * step, current.y + d.y * step, current.z + d.z * step);
            let c = sum_sq(&candidate, &checker.ues);
            if c < best_move.map_or(cost, |(_, bc)| bc) && checker.feasible(&candidate) {
                best_move = Some((candidate, c));
            }
        }
        match best_move {
            Some((p, c)) => {
                current = p;
                cost = c;
            }
            None => step /= 2.0,
        }
    }
    (current, iterations, step)
}

fn diagnostics(p: Point3, ctx: &FeasibilityContext, s: &Scenario, checker: &Checker) -> Vec<UeDiagnostics> {
    s.ues
        .iter()
        .zip(&ctx.requirements)
        .enumerate()
        .map(|(i, (ue, req))| {
            let distance = p.distance(&ue.position);
            UeDiagnostics {
                ue_id: ue.id.clone(),
                distance_m: distance,
                d_max_m: req.d_max_m,
                snr_db: snr_db(ctx.tx_power_dbm, distance, &s.radio).unwrap_or(f64::INFINITY),
                min_snr_db: req.min_snr_db,
                snr_margin_db: 20.0 * (req.d_max_m / distance).log10(),
                mcs_index: req.mcs.index,
                granted_capacity_bps: req.mcs.phy_rate_bps,
                los: checker.los(i, &p),
            }
        })
        .collect()
}
