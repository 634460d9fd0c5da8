//! Two-mode mission loop.
//!
//! Each cycle advances the obstacles by one time step and senses from the
//! current robot position. With nothing in range the robot runs a short BA or
//! MFBA search over the disc of radius `step_length` around itself and moves to
//! the candidate closest to the goal. Otherwise it steps `step_length` along the
//! free gap nearest the goal direction, or holds still when every gap is
//! blocked.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::benchmarks::TrialStatistics;
use crate::environment::{fitness, path_length, Bounds, EnvironmentSpec, Point2};
use crate::optimizer::{optimize, Algorithm, OptimizerConfig, SearchSpace, SwarmRng};
use crate::perception::{
    build_gap_vector, build_sensory_vector, obstacle_detected, select_gap, GapChoice, SensorConfig,
    SensoryVector,
};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PlannerConfig {
    pub algorithm: Algorithm,
    /// Swarm parameters for every waypoint search. `max_iterations`,
    /// `rng_seed` and the schedule are overridden per waypoint.
    pub optimizer: OptimizerConfig,
    pub sensor: SensorConfig,
    /// Maximum displacement per cycle, metres.
    pub step_length: f64,
    pub waypoint_iterations: usize,
    pub max_cycles: usize,
    pub goal_tolerance: f64,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        PlannerConfig {
            algorithm: Algorithm::Mfba,
            optimizer: OptimizerConfig::default(),
            sensor: SensorConfig::default(),
            step_length: 0.5,
            waypoint_iterations: 50,
            max_cycles: 200,
            goal_tolerance: 0.1,
        }
    }
}

impl PlannerConfig {
    pub fn validate(&self) -> Result<()> {
        self.waypoint_optimizer(0).validate()?;
        self.sensor.validate()?;
        if !(self.step_length > 0.0 && self.step_length.is_finite()) {
            return Err(Error::invalid(
                "step_length",
                self.step_length,
                "must be positive",
            ));
        }
        if !(self.goal_tolerance > 0.0 && self.goal_tolerance.is_finite()) {
            return Err(Error::invalid(
                "goal_tolerance",
                self.goal_tolerance,
                "must be positive",
            ));
        }
        if self.max_cycles == 0 {
            return Err(Error::invalid(
                "max_cycles",
                self.max_cycles,
                "must be positive",
            ));
        }
        Ok(())
    }

    pub fn with_algorithm(mut self, algorithm: Algorithm) -> Self {
        self.algorithm = algorithm;
        self
    }

    /// Optimizer settings for one waypoint search.
    pub fn waypoint_optimizer(&self, seed: u64) -> OptimizerConfig {
        OptimizerConfig {
            max_iterations: self.waypoint_iterations,
            rng_seed: seed,
            ..self.optimizer.clone()
        }
        .with_algorithm(self.algorithm)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Initial record at the start point.
    Start,
    Navigate,
    Avoid,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Start => "start",
            Mode::Navigate => "navigate",
            Mode::Avoid => "avoid",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "start" => Ok(Mode::Start),
            "navigate" => Ok(Mode::Navigate),
            "avoid" => Ok(Mode::Avoid),
            _ => Err(Error::invalid(
                "mode",
                s,
                "expected start, navigate or avoid",
            )),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// State at the end of one cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleRecord {
    pub cycle: usize,
    pub time: f64,
    pub position: Point2,
    pub mode: Mode,
    /// Sensed at the start of the cycle, before moving.
    pub sensory: SensoryVector,
    pub escape_bearing_deg: Option<f64>,
    /// Obstacle centers at `time`.
    pub obstacles: Vec<Point2>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MissionSummary {
    pub path_length: f64,
    /// Number of cycles after the start record.
    pub cycle_count: usize,
    pub collision: bool,
    pub reached: bool,
}

impl MissionSummary {
    /// Recomputes the summary of a trace recorded in `env`.
    pub fn from_records(
        records: &[CycleRecord],
        env: &EnvironmentSpec,
        goal_tolerance: f64,
    ) -> Self {
        let waypoints: Vec<Point2> = records.iter().map(|r| r.position).collect();
        let last = waypoints.last().copied().unwrap_or(env.start);
        MissionSummary {
            path_length: path_length(&waypoints).unwrap_or(0.0),
            cycle_count: records.len().saturating_sub(1),
            collision: records.iter().any(|r| env.in_collision(r.position, r.time)),
            reached: last.distance(env.goal) <= goal_tolerance,
        }
    }

    /// Reached the goal without touching an obstacle.
    pub fn succeeded(&self) -> bool {
        self.reached && !self.collision
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MissionTrace {
    pub algorithm: Algorithm,
    pub seed: u64,
    pub records: Vec<CycleRecord>,
    pub summary: MissionSummary,
    pub elapsed: Duration,
}

impl MissionTrace {
    pub fn waypoints(&self) -> Vec<Point2> {
        self.records.iter().map(|r| r.position).collect()
    }

    /// `1 / (path_length + epsilon)`.
    pub fn run_fitness(&self, epsilon: f64) -> f64 {
        1.0 / (self.summary.path_length + epsilon)
    }

    /// Records and summary; the wall-clock time is left out.
    pub fn same_path(&self, other: &MissionTrace) -> bool {
        self.records == other.records && self.summary == other.summary
    }
}

/// Next waypoint in navigation mode, searched within `step_length` of `robot`
/// and inside the workspace. Candidates overlapping an obstacle at `time` or
/// one step later score zero fitness; if nothing feasible is found the robot
/// stays where it is.
pub fn plan_next_waypoint(
    robot: Point2,
    env: &EnvironmentSpec,
    time: f64,
    config: &PlannerConfig,
    seed: u64,
) -> Result<Point2> {
    let goal = env.goal;
    let reach = config.step_length;
    if robot.distance(goal) <= reach {
        return Ok(goal);
    }
    let bounds = env.bounds;
    let space = SearchSpace::new(
        vec![
            (robot.x - reach).max(bounds.min.x),
            (robot.y - reach).max(bounds.min.y),
        ],
        vec![
            (robot.x + reach).min(bounds.max.x),
            (robot.y + reach).min(bounds.max.y),
        ],
    )?
    .with_ball(vec![robot.x, robot.y], reach)?;
    let cfg = config.waypoint_optimizer(seed);
    let epsilon = cfg.epsilon;
    let next_time = time + env.time_step;
    let objective = |x: &[f64]| {
        let p = Point2::new(x[0], x[1]);
        if env.in_collision(p, time) || env.in_collision(p, next_time) {
            0.0
        } else {
            -fitness(p, goal, epsilon)
        }
    };
    let result = optimize(objective, &space, &cfg)?;
    if result.best_value < 0.0 {
        Ok(Point2::new(
            result.best_position[0],
            result.best_position[1],
        ))
    } else {
        Ok(robot)
    }
}

/// Moves `step_length` along `bearing_deg`, clamped to `bounds`.
pub fn avoidance_step(
    robot: Point2,
    bearing_deg: f64,
    step_length: f64,
    bounds: &Bounds,
) -> Point2 {
    bounds.clamp(robot.offset(bearing_deg.to_radians(), step_length))
}

pub fn run_mission(
    env: &EnvironmentSpec,
    config: &PlannerConfig,
    seed: u64,
) -> Result<MissionTrace> {
    env.validate()?;
    config.validate()?;
    let started = Instant::now();
    let mut rng = SwarmRng::seed_from_u64(seed);
    let sense = |p: Point2, t: f64| {
        build_sensory_vector(p, &env.obstacles, t, &config.sensor, env.robot_radius)
    };

    let mut position = env.start;
    let mut records = vec![CycleRecord {
        cycle: 0,
        time: 0.0,
        position,
        mode: Mode::Start,
        sensory: sense(position, 0.0),
        escape_bearing_deg: None,
        obstacles: env.obstacle_positions(0.0),
    }];
    let mut collision = env.in_collision(position, 0.0);
    let mut reached = position.distance(env.goal) <= config.goal_tolerance;
    let mut cycle = 0;

    while !reached && !collision && cycle < config.max_cycles {
        cycle += 1;
        let time = cycle as f64 * env.time_step;
        let sensory = sense(position, time);
        let (mode, escape_bearing_deg, next) = if obstacle_detected(&sensory) {
            match select_gap(&build_gap_vector(&sensory), position, env.goal) {
                GapChoice::Escape { bearing_deg, .. } => (
                    Mode::Avoid,
                    Some(bearing_deg),
                    avoidance_step(position, bearing_deg, config.step_length, &env.bounds),
                ),
                GapChoice::Blocked => (Mode::Avoid, None, position),
            }
        } else {
            let waypoint_seed = rng.gen::<u64>();
            let next = plan_next_waypoint(position, env, time, config, waypoint_seed)?;
            (Mode::Navigate, None, next)
        };
        position = next;
        collision = env.in_collision(position, time);
        reached = position.distance(env.goal) <= config.goal_tolerance;
        records.push(CycleRecord {
            cycle,
            time,
            position,
            mode,
            sensory,
            escape_bearing_deg,
            obstacles: env.obstacle_positions(time),
        });
    }

    let waypoints: Vec<Point2> = records.iter().map(|r| r.position).collect();
    let summary = MissionSummary {
        path_length: path_length(&waypoints).unwrap_or(0.0),
        cycle_count: cycle,
        collision,
        reached,
    };
    Ok(MissionTrace {
        algorithm: config.algorithm,
        seed,
        records,
        summary,
        elapsed: started.elapsed(),
    })
}

/// Min/max/mean/SD of run fitness over the successful runs of a batch.
#[derive(Debug, Clone, PartialEq)]
pub struct FitnessStatistics {
    pub minimum: f64,
    pub maximum: f64,
    pub standard_deviation: f64,
    pub mean: f64,
    pub count: usize,
}

impl FitnessStatistics {
    pub fn from_values(values: &[f64]) -> Option<Self> {
        let stats = TrialStatistics::from_values(values).ok()?;
        Some(FitnessStatistics {
            minimum: stats.best,
            maximum: stats.worst,
            standard_deviation: stats.standard_deviation,
            mean: stats.mean,
            count: stats.run_count,
        })
    }
}

#[derive(Debug, Clone)]
pub struct MissionBatch {
    /// One trace per run, in seed order.
    pub traces: Vec<MissionTrace>,
    /// Index of the shortest successful run.
    pub best: Option<usize>,
}

impl MissionBatch {
    pub fn best_trace(&self) -> Option<&MissionTrace> {
        self.best.map(|i| &self.traces[i])
    }

    pub fn fitness_values(&self, epsilon: f64) -> Vec<f64> {
        self.traces
            .iter()
            .filter(|t| t.summary.succeeded())
            .map(|t| t.run_fitness(epsilon))
            .collect()
    }

    pub fn fitness_statistics(&self, epsilon: f64) -> Option<FitnessStatistics> {
        FitnessStatistics::from_values(&self.fitness_values(epsilon))
    }
}

/// `run_count` missions seeded `base_seed, base_seed + 1, ...`.
pub fn best_of_runs(
    env: &EnvironmentSpec,
    config: &PlannerConfig,
    run_count: usize,
    base_seed: u64,
) -> Result<MissionBatch> {
    if run_count == 0 {
        return Err(Error::invalid("run_count", run_count, "must be positive"));
    }
    let traces = (0..run_count)
        .into_par_iter()
        .map(|i| run_mission(env, config, base_seed.wrapping_add(i as u64)))
        .collect::<Result<Vec<_>>>()?;
    let best = traces
        .iter()
        .enumerate()
        .filter(|(_, t)| t.summary.succeeded())
        .min_by(|(_, a), (_, b)| a.summary.path_length.total_cmp(&b.summary.path_length))
        .map(|(i, _)| i);
    Ok(MissionBatch { traces, best })
}
