//! Planar workspace with circular obstacles moving at constant velocity.

use std::ops::{Add, Mul, Sub};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Direction from `self` to `other` in radians, world frame.
    pub fn bearing_to(self, other: Point2) -> f64 {
        (other.y - self.y).atan2(other.x - self.x)
    }

    /// Point reached by moving `length` along `angle` (radians).
    pub fn offset(self, angle: f64, length: f64) -> Point2 {
        Point2::new(self.x + length * angle.cos(), self.y + length * angle.sin())
    }

    /// Rotation by `angle` radians about `pivot`.
    pub fn rotate_about(self, pivot: Point2, angle: f64) -> Point2 {
        let (s, c) = angle.sin_cos();
        let d = self - pivot;
        Point2::new(pivot.x + c * d.x - s * d.y, pivot.y + s * d.x + c * d.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;

    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;

    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;

    fn mul(self, rhs: f64) -> Point2 {
        Point2::new(self.x * rhs, self.y * rhs)
    }
}

/// Circular obstacle moving on a straight line at constant speed. It does not
/// stop at the workspace edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Obstacle {
    pub initial_center: Point2,
    pub radius: f64,
    /// m/s
    pub speed: f64,
    /// World-frame heading in degrees, counter-clockwise from +x.
    pub heading_deg: f64,
}

impl Obstacle {
    pub fn new(initial_center: Point2, radius: f64, speed: f64, heading_deg: f64) -> Result<Self> {
        let obstacle = Obstacle {
            initial_center,
            radius,
            speed,
            heading_deg,
        };
        obstacle.validate()?;
        Ok(obstacle)
    }

    pub fn stationary(center: Point2, radius: f64) -> Result<Self> {
        Self::new(center, radius, 0.0, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.initial_center.is_finite() {
            return Err(Error::invalid(
                "obstacle center",
                format!("{:?}", self.initial_center),
                "must be finite",
            ));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::invalid(
                "obstacle radius",
                self.radius,
                "must be positive",
            ));
        }
        if !(self.speed >= 0.0 && self.speed.is_finite()) {
            return Err(Error::invalid(
                "obstacle speed",
                self.speed,
                "must be non-negative",
            ));
        }
        if !self.heading_deg.is_finite() {
            return Err(Error::invalid(
                "obstacle heading",
                self.heading_deg,
                "must be finite",
            ));
        }
        Ok(())
    }

    pub fn position_at(&self, t: f64) -> Point2 {
        let heading = self.heading_deg.to_radians();
        self.initial_center.offset(heading, self.speed * t)
    }
}

pub fn obstacle_position(obstacle: &Obstacle, t: f64) -> Point2 {
    obstacle.position_at(t)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobotState {
    pub position: Point2,
    pub radius: f64,
}

/// Obstacle radius grown by the robot radius, so the robot can be treated as
/// a point.
pub fn inflate_radius(obstacle: &Obstacle, robot_radius: f64) -> f64 {
    obstacle.radius + robot_radius
}

/// Strict overlap between the robot disc at `point` and the obstacle disc at
/// time `t`. Touching discs do not collide.
pub fn collision(point: Point2, obstacle: &Obstacle, t: f64, robot_radius: f64) -> bool {
    point.distance(obstacle.position_at(t)) < inflate_radius(obstacle, robot_radius)
}

pub fn segment_length(p: Point2, q: Point2) -> f64 {
    p.distance(q)
}

/// `1 / (|candidate - reference| + epsilon)`.
pub fn fitness(candidate: Point2, reference: Point2, epsilon: f64) -> f64 {
    1.0 / (segment_length(candidate, reference) + epsilon)
}

pub fn path_length(waypoints: &[Point2]) -> Result<f64> {
    if waypoints.len() < 2 {
        return Err(Error::TooFewWaypoints(waypoints.len()));
    }
    Ok(waypoints
        .windows(2)
        .map(|w| segment_length(w[0], w[1]))
        .sum())
}

/// Axis-aligned rectangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub min: Point2,
    pub max: Point2,
}

impl Bounds {
    pub fn new(min: Point2, max: Point2) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && min.x < max.x && min.y < max.y) {
            return Err(Error::invalid(
                "bounds",
                format!("[{}, {}] x [{}, {}]", min.x, max.x, min.y, max.y),
                "need finite min < max on both axes",
            ));
        }
        Ok(Bounds { min, max })
    }

    pub fn contains(&self, p: Point2) -> bool {
        (self.min.x..=self.max.x).contains(&p.x) && (self.min.y..=self.max.y).contains(&p.y)
    }

    pub fn clamp(&self, p: Point2) -> Point2 {
        Point2::new(
            p.x.clamp(self.min.x, self.max.x),
            p.y.clamp(self.min.y, self.max.y),
        )
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            min: Point2::new(0.0, 0.0),
            max: Point2::new(13.0, 13.0),
        }
    }
}

pub const DEFAULT_START: Point2 = Point2::new(0.0, 0.0);
pub const DEFAULT_GOAL: Point2 = Point2::new(12.0, 12.0);
pub const DEFAULT_ROBOT_RADIUS: f64 = 0.3;
pub const DEFAULT_TIME_STEP: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct EnvironmentSpec {
    pub bounds: Bounds,
    pub start: Point2,
    pub goal: Point2,
    pub obstacles: Vec<Obstacle>,
    /// Seconds per planner cycle.
    pub time_step: f64,
    pub robot_radius: f64,
}

impl Default for EnvironmentSpec {
    fn default() -> Self {
        EnvironmentSpec {
            bounds: Bounds::default(),
            start: DEFAULT_START,
            goal: DEFAULT_GOAL,
            obstacles: Vec::new(),
            time_step: DEFAULT_TIME_STEP,
            robot_radius: DEFAULT_ROBOT_RADIUS,
        }
    }
}

impl EnvironmentSpec {
    pub fn validate(&self) -> Result<()> {
        Bounds::new(self.bounds.min, self.bounds.max)?;
        if !self.bounds.contains(self.start) {
            return Err(Error::invalid(
                "start",
                format!("({}, {})", self.start.x, self.start.y),
                "must lie inside the bounds",
            ));
        }
        if !self.bounds.contains(self.goal) {
            return Err(Error::invalid(
                "goal",
                format!("({}, {})", self.goal.x, self.goal.y),
                "must lie inside the bounds",
            ));
        }
        if self.start == self.goal {
            return Err(Error::invalid(
                "goal",
                format!("({}, {})", self.goal.x, self.goal.y),
                "must differ from start",
            ));
        }
        if !(self.time_step > 0.0 && self.time_step.is_finite()) {
            return Err(Error::invalid(
                "time_step",
                self.time_step,
                "must be positive",
            ));
        }
        if !(self.robot_radius > 0.0 && self.robot_radius.is_finite()) {
            return Err(Error::invalid(
                "robot_radius",
                self.robot_radius,
                "must be positive",
            ));
        }
        self.obstacles.iter().try_for_each(Obstacle::validate)
    }

    pub fn robot_at(&self, position: Point2) -> RobotState {
        RobotState {
            position,
            radius: self.robot_radius,
        }
    }

    /// Obstacle centers at time `t`.
    pub fn obstacle_positions(&self, t: f64) -> Vec<Point2> {
        self.obstacles.iter().map(|o| o.position_at(t)).collect()
    }

    pub fn in_collision(&self, point: Point2, t: f64) -> bool {
        self.obstacles
            .iter()
            .any(|o| collision(point, o, t, self.robot_radius))
    }

    pub fn straight_line_distance(&self) -> f64 {
        segment_length(self.start, self.goal)
    }

    pub fn preset(preset: Preset) -> Self {
        EnvironmentSpec {
            obstacles: preset.obstacles(),
            ..Default::default()
        }
    }
}

/// Built-in scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Three moving obstacles.
    Case1,
    /// Five moving obstacles.
    Case2,
    /// No obstacles.
    Empty,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Case1, Preset::Case2, Preset::Empty];

    pub fn name(self) -> &'static str {
        match self {
            Preset::Case1 => "case1",
            Preset::Case2 => "case2",
            Preset::Empty => "empty",
        }
    }

    pub fn obstacles(self) -> Vec<Obstacle> {
        let o = |x, y, speed, heading_deg| Obstacle {
            initial_center: Point2::new(x, y),
            radius: 0.3,
            speed,
            heading_deg,
        };
        match self {
            Preset::Case1 => vec![
                o(1.0, 4.5, 0.3, 0.0),
                o(10.5, 6.0, 0.2, 180.0),
                o(6.0, 12.0, 0.15, 270.0),
            ],
            Preset::Case2 => vec![
                o(4.0, 2.0, 0.3, 111.8),
                o(3.0, 7.0, 0.2, 315.0),
                o(9.0, 4.0, 0.2, 126.8),
                o(7.0, 9.0, 0.25, 315.0),
                o(11.2, 7.0, 0.22, 150.0),
            ],
            Preset::Empty => Vec::new(),
        }
    }
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::invalid("preset", s, "expected case1, case2 or empty"))
    }
}

impl std::fmt::Display for Preset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn table_obstacle(index: usize) -> Obstacle {
        Preset::Case1.obstacles()[index]
    }

    #[test]
    fn static_obstacle_stays_put() {
        let o = Obstacle::stationary(Point2::new(2.0, 3.0), 0.3).unwrap();
        for t in [0.0, 1.0, 100.0] {
            assert_eq!(o.position_at(t), Point2::new(2.0, 3.0));
        }
    }

    #[test]
    fn preset_obstacles_move_along_heading() {
        let p = obstacle_position(&table_obstacle(0), 10.0);
        assert_abs_diff_eq!(p.x, 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.y, 4.5, epsilon = 1e-12);
        let p = obstacle_position(&table_obstacle(2), 2.0);
        assert_abs_diff_eq!(p.x, 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.y, 11.7, epsilon = 1e-12);
    }

    #[test]
    fn inflation_adds_radii() {
        let o = Obstacle::stationary(Point2::new(0.0, 0.0), 0.3).unwrap();
        assert_abs_diff_eq!(inflate_radius(&o, 0.2), 0.5, epsilon = 1e-15);
        assert_eq!(inflate_radius(&o, 0.0), 0.3);
        let swapped = Obstacle::stationary(Point2::new(0.0, 0.0), 0.2).unwrap();
        assert_eq!(inflate_radius(&o, 0.2), inflate_radius(&swapped, 0.3));
    }

    #[test]
    fn collision_convention() {
        let o = Obstacle::stationary(Point2::new(1.0, 0.0), 0.25).unwrap();
        assert!(collision(Point2::new(1.0, 0.0), &o, 0.0, 0.25));
        // Tangent discs: distance 0.5 == 0.25 + 0.25.
        assert!(!collision(Point2::new(0.5, 0.0), &o, 0.0, 0.25));
        assert!(!collision(Point2::new(0.0, 0.0), &o, 0.0, 0.25));
    }

    #[test]
    fn distances_and_fitness() {
        let p = Point2::new(1.5, -2.0);
        assert_eq!(segment_length(p, p), 0.0);
        assert_abs_diff_eq!(fitness(p, p, 0.001), 1000.0, epsilon = 1e-9);
        assert_abs_diff_eq!(
            segment_length(DEFAULT_START, DEFAULT_GOAL),
            16.9705,
            epsilon = 1e-4
        );
        assert_eq!(
            segment_length(Point2::new(0.0, 0.0), Point2::new(3.0, 4.0)),
            5.0
        );
    }

    #[test]
    fn path_lengths() {
        assert_abs_diff_eq!(
            path_length(&[DEFAULT_START, DEFAULT_GOAL]).unwrap(),
            16.9705,
            epsilon = 1e-4
        );
        let unit = [
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
        ];
        assert_eq!(path_length(&unit).unwrap(), 2.0);
        assert_eq!(path_length(&unit[..1]), Err(Error::TooFewWaypoints(1)));
    }

    #[test]
    fn presets_are_valid() {
        for preset in Preset::ALL {
            let env = EnvironmentSpec::preset(preset);
            env.validate().unwrap();
            assert_eq!(env.start, Point2::new(0.0, 0.0));
            assert_eq!(env.goal, Point2::new(12.0, 12.0));
        }
        assert_eq!(Preset::Case1.obstacles().len(), 3);
        assert_eq!(Preset::Case2.obstacles().len(), 5);
        assert_eq!("CASE2".parse::<Preset>().unwrap(), Preset::Case2);
    }

    #[test]
    fn invalid_environment() {
        let env = EnvironmentSpec {
            goal: DEFAULT_START,
            ..Default::default()
        };
        assert!(env.validate().is_err());
        let env = EnvironmentSpec {
            time_step: 0.0,
            ..Default::default()
        };
        assert!(env.validate().is_err());
        let env = EnvironmentSpec {
            goal: Point2::new(20.0, 0.0),
            ..Default::default()
        };
        assert!(env.validate().is_err());
        assert!(Obstacle::new(Point2::default(), 0.0, 1.0, 0.0).is_err());
        assert!(Obstacle::new(Point2::default(), 0.3, -1.0, 0.0).is_err());
    }

    fn point() -> impl Strategy<Value = Point2> {
        (-20.0f64..20.0, -20.0f64..20.0).prop_map(|(x, y)| Point2::new(x, y))
    }

    proptest! {
        #[test]
        fn triangle_inequality(a in point(), b in point(), c in point()) {
            let via = path_length(&[a, b, c]).unwrap();
            prop_assert!(via >= segment_length(a, c) - 1e-12);
        }

        #[test]
        fn collinear_subdivision_keeps_length(a in point(), b in point(), cuts in prop::collection::vec(0.0f64..1.0, 0..10)) {
            let mut ts = cuts;
            ts.sort_by(f64::total_cmp);
            let mut pts = vec![a];
            pts.extend(ts.iter().map(|t| a + (b - a) * *t));
            pts.push(b);
            prop_assert!((path_length(&pts).unwrap() - segment_length(a, b)).abs() < 1e-9);
        }

        #[test]
        fn fitness_decreases_with_distance(r in point(), a in point(), b in point()) {
            let (da, db) = (segment_length(a, r), segment_length(b, r));
            let (fa, fb) = (fitness(a, r, 0.001), fitness(b, r, 0.001));
            if da < db {
                prop_assert!(fa > fb);
            }
        }

        #[test]
        fn collision_is_monotone_in_radius(p in point(), c in point(), r in 0.01f64..3.0, extra in 0.0f64..3.0) {
            let o = Obstacle::stationary(c, r).unwrap();
            if collision(p, &o, 0.0, 0.0) {
                let bigger = Obstacle::stationary(c, r + extra).unwrap();
                prop_assert!(collision(p, &bigger, 0.0, 0.0));
            }
        }

        #[test]
        fn motion_is_linear(c in point(), speed in 0.0f64..2.0, heading in 0.0f64..360.0, t in 0.0f64..100.0) {
            let o = Obstacle::new(c, 0.3, speed, heading).unwrap();
            let d1 = o.position_at(2.0 * t) - o.position_at(t);
            let d0 = o.position_at(t) - o.position_at(0.0);
            prop_assert!((d1.x - d0.x).abs() < 1e-9 && (d1.y - d0.y).abs() < 1e-9);
        }
    }
}
