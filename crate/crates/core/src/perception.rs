//! Ring of virtual range sensors around the robot.
//!
//! Sector `i` (1-based) covers bearings `[(i - 1) w, i w)` in the world frame,
//! with `w = 360° / sensor_count`. A sector is occupied when the tangent cone
//! from the robot to some inflated obstacle within sensing range overlaps it
//! with positive measure. Gap bit `i` joins sectors `i` and `i + 1` (wrapping)
//! and is free only when both are free; a free gap bit stands for the bearing
//! `i w` on the boundary between the two sectors.

use std::f64::consts::TAU;
use std::fmt;

use crate::environment::{inflate_radius, Obstacle, Point2};
use crate::{Error, Result};

/// Overlaps and ties closer than this (radians or degrees) are treated as
/// touching rather than overlapping.
const ANGLE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensorConfig {
    pub sensor_count: usize,
    /// Sensing range in metres, measured to the nearest point of an inflated
    /// obstacle.
    pub sensing_range: f64,
}

impl Default for SensorConfig {
    fn default() -> Self {
        SensorConfig {
            sensor_count: 12,
            sensing_range: 0.8,
        }
    }
}

impl SensorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(3..=360).contains(&self.sensor_count) {
            return Err(Error::invalid(
                "sensor_count",
                self.sensor_count,
                "must lie in [3, 360]",
            ));
        }
        if !(self.sensing_range > 0.0 && self.sensing_range.is_finite()) {
            return Err(Error::invalid(
                "sensing_range",
                self.sensing_range,
                "must be positive",
            ));
        }
        Ok(())
    }

    pub fn sector_width_deg(&self) -> f64 {
        360.0 / self.sensor_count as f64
    }

    pub fn sector_width(&self) -> f64 {
        TAU / self.sensor_count as f64
    }
}

macro_rules! bit_ring {
    ($name:ident) => {
        #[derive(Debug, Clone, PartialEq, Eq, Hash)]
        pub struct $name {
            bits: Vec<bool>,
        }

        impl $name {
            pub fn from_bits(bits: Vec<bool>) -> Self {
                $name { bits }
            }

            pub fn zeros(len: usize) -> Self {
                $name {
                    bits: vec![false; len],
                }
            }

            /// Parses a string of `0`/`1` characters, bit 1 first.
            pub fn parse(s: &str) -> Result<Self> {
                s.chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(Error::invalid(
                            stringify!($name),
                            s,
                            "expected only 0 and 1",
                        )),
                    })
                    .collect::<Result<Vec<_>>>()
                    .map(Self::from_bits)
            }

            pub fn bits(&self) -> &[bool] {
                &self.bits
            }

            pub fn len(&self) -> usize {
                self.bits.len()
            }

            pub fn is_empty(&self) -> bool {
                self.bits.is_empty()
            }

            /// Bit `i`, 1-based.
            pub fn bit(&self, i: usize) -> bool {
                self.bits[i - 1]
            }

            pub fn count_ones(&self) -> usize {
                self.bits.iter().filter(|b| **b).count()
            }

            pub fn any(&self) -> bool {
                self.bits.iter().any(|b| *b)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                for b in &self.bits {
                    f.write_str(if *b { "1" } else { "0" })?;
                }
                Ok(())
            }
        }
    };
}

bit_ring!(SensoryVector);
bit_ring!(GapVector);

impl SensoryVector {
    pub fn union(&self, other: &SensoryVector) -> SensoryVector {
        SensoryVector::from_bits(
            self.bits
                .iter()
                .zip(&other.bits)
                .map(|(a, b)| *a || *b)
                .collect(),
        )
    }
}

/// Angular extent of an inflated obstacle seen from the robot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TangentInterval {
    /// The robot is inside the inflated disc.
    FullCircle,
    /// Counter-clockwise arc from `start` (normalized to `[0, 2π)`) spanning
    /// `width` radians, `0 <= width < π`.
    Arc { start: f64, width: f64 },
}

impl TangentInterval {
    pub fn start_deg(&self) -> f64 {
        match self {
            TangentInterval::FullCircle => 0.0,
            TangentInterval::Arc { start, .. } => start.to_degrees(),
        }
    }

    pub fn end_deg(&self) -> f64 {
        match self {
            TangentInterval::FullCircle => 360.0,
            TangentInterval::Arc { start, width } => normalize_angle(start + width).to_degrees(),
        }
    }

    pub fn width(&self) -> f64 {
        match self {
            TangentInterval::FullCircle => TAU,
            TangentInterval::Arc { width, .. } => *width,
        }
    }

    /// Occupancy of each of `sensor_count` sectors.
    pub fn sectors(&self, sensor_count: usize) -> Vec<bool> {
        let (start, width) = match *self {
            TangentInterval::FullCircle => return vec![true; sensor_count],
            TangentInterval::Arc { start, width } => (start, width),
        };
        let sector = TAU / sensor_count as f64;
        if width == 0.0 {
            // A point obstacle marks the sector that holds its bearing.
            let k = ((start / sector).floor() as usize).min(sensor_count - 1);
            let mut bits = vec![false; sensor_count];
            bits[k] = true;
            return bits;
        }
        let end = start + width;
        (0..sensor_count)
            .map(|k| {
                let lo = k as f64 * sector;
                let hi = lo + sector;
                [0.0, TAU].iter().any(|shift| {
                    let overlap = end.min(hi + shift) - start.max(lo + shift);
                    overlap > ANGLE_TOLERANCE
                })
            })
            .collect()
    }
}

fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Tangent cone from `robot` to `obstacle` (inflated by `robot_radius`) at
/// time `t`, or `None` when the inflated disc is farther than `sensing_range`.
pub fn tangent_interval(
    robot: Point2,
    obstacle: &Obstacle,
    t: f64,
    robot_radius: f64,
    sensing_range: f64,
) -> Option<TangentInterval> {
    let center = obstacle.position_at(t);
    let radius = inflate_radius(obstacle, robot_radius);
    let d = robot.distance(center);
    if d - radius > sensing_range {
        return None;
    }
    if d <= radius {
        return Some(TangentInterval::FullCircle);
    }
    let half = (radius / d).asin();
    let bearing = robot.bearing_to(center);
    Some(TangentInterval::Arc {
        start: normalize_angle(bearing - half),
        width: 2.0 * half,
    })
}

pub fn build_sensory_vector(
    robot: Point2,
    obstacles: &[Obstacle],
    t: f64,
    config: &SensorConfig,
    robot_radius: f64,
) -> SensoryVector {
    let mut bits = vec![false; config.sensor_count];
    for interval in obstacles
        .iter()
        .filter_map(|o| tangent_interval(robot, o, t, robot_radius, config.sensing_range))
    {
        for (bit, hit) in bits.iter_mut().zip(interval.sectors(config.sensor_count)) {
            *bit |= hit;
        }
    }
    SensoryVector::from_bits(bits)
}

/// `b(i) = a(i) OR a(i + 1)`, wrapping at the end.
pub fn build_gap_vector(vs: &SensoryVector) -> GapVector {
    let n = vs.len();
    GapVector::from_bits((0..n).map(|i| vs.bits[i] || vs.bits[(i + 1) % n]).collect())
}

pub fn obstacle_detected(vs: &SensoryVector) -> bool {
    vs.any()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GapChoice {
    /// Free gap bit `bit` (1-based) and its boundary bearing in degrees,
    /// within `[0, 360)`.
    Escape {
        bit: usize,
        bearing_deg: f64,
    },
    Blocked,
}

impl GapChoice {
    pub fn bearing_deg(&self) -> Option<f64> {
        match self {
            GapChoice::Escape { bearing_deg, .. } => Some(*bearing_deg),
            GapChoice::Blocked => None,
        }
    }
}

/// Boundary bearing of gap bit `bit` (1-based) in degrees.
pub fn gap_bearing_deg(bit: usize, sensor_count: usize) -> f64 {
    if bit == sensor_count {
        0.0
    } else {
        bit as f64 * 360.0 / sensor_count as f64
    }
}

fn circular_distance_deg(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(360.0);
    d.min(360.0 - d)
}

/// Free gap whose bearing is angularly closest to the direction of `goal`;
/// ties go to the lower bit index.
pub fn select_gap(vg: &GapVector, robot: Point2, goal: Point2) -> GapChoice {
    select_gap_towards(vg, robot.bearing_to(goal).to_degrees())
}

/// [`select_gap`] with the goal direction given in degrees.
pub fn select_gap_towards(vg: &GapVector, goal_bearing_deg: f64) -> GapChoice {
    let n = vg.len();
    let mut best: Option<(usize, f64, f64)> = None;
    for bit in (1..=n).filter(|&i| !vg.bit(i)) {
        let bearing = gap_bearing_deg(bit, n);
        let dist = circular_distance_deg(bearing, goal_bearing_deg);
        match best {
            Some((_, _, d)) if dist >= d - ANGLE_TOLERANCE => {}
            _ => best = Some((bit, bearing, dist)),
        }
    }
    match best {
        Some((bit, bearing_deg, _)) => GapChoice::Escape { bit, bearing_deg },
        None => GapChoice::Blocked,
    }
}
