//! Geometry primitives for line-of-sight reasoning.
//!
//! Obstacles are axis-aligned boxes standing on (or above) the ground plane
//! `z = 0`. The authoritative LoS test is [`segment_intersects_box`], a slab
//! clip of the open segment against the box interior. The elevation-angle
//! form of the constraint ([`corner_elevation_angle`] versus
//! [`uav_elevation_angle`]) is kept alongside it for vertical-plane
//! configurations where the two agree.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance, in meters, for slab comparisons.
pub const SLAB_TOLERANCE_M: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn axis(&self, k: usize) -> f64 {
        match k {
            0 => self.x,
            1 => self.y,
            2 => self.z,
            _ => panic!("axis index {k} out of range"),
        }
    }

    pub fn distance(&self, other: &Point3) -> f64 {
        self.distance_sq(other).sqrt()
    }

    pub fn distance_sq(&self, other: &Point3) -> f64 {
        let d = *self - *other;
        d.x * d.x + d.y * d.y + d.z * d.z
    }

    pub fn horizontal_distance(&self, other: &Point3) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

impl From<[f64; 3]> for Point3 {
    fn from([x, y, z]: [f64; 3]) -> Self {
        Self { x, y, z }
    }
}

impl From<Point3> for [f64; 3] {
    fn from(p: Point3) -> Self {
        [p.x, p.y, p.z]
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, rhs: Point3) -> Point3 {
        Point3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, rhs: Point3) -> Point3 {
        Point3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl fmt::Display for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.3}, {:.3}, {:.3})", self.x, self.y, self.z)
    }
}

/// Axis-aligned box obstacle stored as a corner pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxObstacle {
    min: Point3,
    max: Point3,
}

impl BoxObstacle {
    pub fn new(min_corner: Point3, max_corner: Point3) -> Result<Self> {
        if !min_corner.is_finite() || !max_corner.is_finite() {
            return Err(Error::InvalidObstacle("non-finite corner".into()));
        }
        if !(min_corner.x < max_corner.x && min_corner.y < max_corner.y && min_corner.z < max_corner.z) {
            return Err(Error::InvalidObstacle(format!(
                "min corner {min_corner} is not below max corner {max_corner} on every axis"
            )));
        }
        if min_corner.z < 0.0 {
            return Err(Error::InvalidObstacle(format!(
                "base z = {} is below ground",
                min_corner.z
            )));
        }
        Ok(Self {
            min: min_corner,
            max: max_corner,
        })
    }

    /// Building standing on the ground, given its footprint center and
    /// (length along x, width along y, height).
    pub fn from_footprint(center_x: f64, center_y: f64, length: f64, width: f64, height: f64) -> Result<Self> {
        Self::new(
            Point3::new(center_x - length / 2.0, center_y - width / 2.0, 0.0),
            Point3::new(center_x + length / 2.0, center_y + width / 2.0, height),
        )
    }

    pub fn min_corner(&self) -> Point3 {
        self.min
    }

    pub fn max_corner(&self) -> Point3 {
        self.max
    }

    pub fn top(&self) -> f64 {
        self.max.z
    }

    pub fn center(&self) -> Point3 {
        Point3::new(
            (self.min.x + self.max.x) / 2.0,
            (self.min.y + self.max.y) / 2.0,
            (self.min.z + self.max.z) / 2.0,
        )
    }

    /// Strict interior membership.
    pub fn contains(&self, p: &Point3) -> bool {
        (0..3).all(|k| p.axis(k) > self.min.axis(k) && p.axis(k) < self.max.axis(k))
    }

    /// Strict membership of the horizontal projection in the footprint.
    pub fn footprint_contains(&self, x: f64, y: f64) -> bool {
        x > self.min.x && x < self.max.x && y > self.min.y && y < self.max.y
    }

    pub fn translated(&self, v: Point3) -> Self {
        Self {
            min: self.min + v,
            max: self.max + v,
        }
    }
}

/// Whether the open segment `a`–`b` passes through the interior of `obstacle`.
///
/// Touching a face, edge or corner is not an intersection.
pub fn segment_intersects_box(a: Point3, b: Point3, obstacle: &BoxObstacle) -> Result<bool> {
    let dir = b - a;
    let length = (dir.x * dir.x + dir.y * dir.y + dir.z * dir.z).sqrt();
    if length <= SLAB_TOLERANCE_M {
        return Err(Error::DegenerateSegment { x: a.x, y: a.y, z: a.z });
    }

    let mut t_enter = 0.0_f64;
    let mut t_exit = 1.0_f64;
    for k in 0..3 {
        let origin = a.axis(k);
        let d = dir.axis(k);
        let lo = obstacle.min.axis(k);
        let hi = obstacle.max.axis(k);
        if d.abs() <= f64::EPSILON * length {
            // Parallel to this slab: must sit strictly between its planes.
            if origin <= lo + SLAB_TOLERANCE_M || origin >= hi - SLAB_TOLERANCE_M {
                return Ok(false);
            }
            continue;
        }
        let (mut t0, mut t1) = ((lo - origin) / d, (hi - origin) / d);
        if t0 > t1 {
            std::mem::swap(&mut t0, &mut t1);
        }
        t_enter = t_enter.max(t0);
        t_exit = t_exit.min(t1);
        if t_exit <= t_enter {
            return Ok(false);
        }
    }
    Ok((t_exit - t_enter) * length > SLAB_TOLERANCE_M)
}

/// Index of the first obstacle blocking the `ue`–`uav` link, if any.
pub fn first_blocking(ue: Point3, uav: Point3, obstacles: &[BoxObstacle]) -> Result<Option<usize>> {
    for (i, obstacle) in obstacles.iter().enumerate() {
        if segment_intersects_box(ue, uav, obstacle)? {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

pub fn has_los(ue: Point3, uav: Point3, obstacles: &[BoxObstacle]) -> Result<bool> {
    if ue.distance(&uav) <= SLAB_TOLERANCE_M {
        return Err(Error::DegenerateSegment { x: ue.x, y: ue.y, z: ue.z });
    }
    Ok(first_blocking(ue, uav, obstacles)?.is_none())
}

/// Elevation angle from `ue` to the roof edge it sees when looking
/// horizontally toward `toward`.
///
/// The horizontal distance is measured to where the ray from `ue` toward
/// `toward` enters the footprint. A ray that misses the footprint has no
/// occluding edge and yields 0, as does a UE at or above the roof.
pub fn corner_elevation_angle(ue: Point3, obstacle: &BoxObstacle, toward: Point3) -> Result<f64> {
    let rise = obstacle.top() - ue.z;
    if rise <= 0.0 {
        return Ok(0.0);
    }
    if obstacle.footprint_contains(ue.x, ue.y) {
        return Err(Error::InsideFootprint { x: ue.x, y: ue.y });
    }

    let (dx, dy) = (toward.x - ue.x, toward.y - ue.y);
    let norm = dx.hypot(dy);
    let run = if norm <= SLAB_TOLERANCE_M {
        footprint_distance(ue.x, ue.y, obstacle)
    } else {
        match horizontal_ray_entry(ue.x, ue.y, dx / norm, dy / norm, obstacle) {
            Some(run) => run,
            None => return Ok(0.0),
        }
    };
    Ok(rise.atan2(run))
}

pub fn uav_elevation_angle(ue: Point3, uav: Point3) -> f64 {
    let run = ue.horizontal_distance(&uav);
    if run == 0.0 {
        return FRAC_PI_2;
    }
    (uav.z - ue.z).atan2(run)
}

/// The elevation-angle form of the LoS constraint against one obstacle:
/// the UAV must appear at least as high as the occluding roof edge.
pub fn angle_constraint_holds(ue: Point3, uav: Point3, obstacle: &BoxObstacle) -> Result<bool> {
    Ok(corner_elevation_angle(ue, obstacle, uav)? <= uav_elevation_angle(ue, uav))
}

fn footprint_distance(x: f64, y: f64, obstacle: &BoxObstacle) -> f64 {
    let dx = (obstacle.min.x - x).max(0.0).max(x - obstacle.max.x);
    let dy = (obstacle.min.y - y).max(0.0).max(y - obstacle.max.y);
    dx.hypot(dy)
}

/// Distance along a unit horizontal ray to its entry into the footprint.
fn horizontal_ray_entry(x: f64, y: f64, ux: f64, uy: f64, obstacle: &BoxObstacle) -> Option<f64> {
    let mut t_enter = 0.0_f64;
    let mut t_exit = f64::INFINITY;
    for (origin, d, lo, hi) in [
        (x, ux, obstacle.min.x, obstacle.max.x),
        (y, uy, obstacle.min.y, obstacle.max.y),
    ] {
        if d.abs() < f64::EPSILON {
            if origin < lo || origin > hi {
                return None;
            }
            continue;
        }
        let (mut t0, mut t1) = ((lo - origin) / d, (hi - origin) / d);
        if t0 > t1 {
            std::mem::swap(&mut t0, &mut t1);
        }
        t_enter = t_enter.max(t0);
        t_exit = t_exit.min(t1);
    }
    (t_enter <= t_exit).then_some(t_enter)
}
