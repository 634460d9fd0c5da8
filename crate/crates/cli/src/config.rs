//! TOML run configuration.
//!
//! Every key is optional and falls back to the defaults below; unknown keys
//! are rejected. Grammar:
//!
//! ```toml
//! [optimizer]
//! population_size = 5
//! f_min = 0.0
//! f_max = 10.0
//! alpha = 0.98
//! gamma = 0.8
//! sigma = 0.3
//! initial_loudness = 1.0
//! initial_pulse_rate = 0.5
//! max_iterations = 500      # benchmark runs; waypoints use planner.waypoint_iterations
//! rho = 0.01
//! epsilon = 0.001
//!
//! [planner]
//! algorithm = "mfba"        # "ba" or "mfba"
//! step_length = 0.5
//! waypoint_iterations = 50
//! max_cycles = 200
//! goal_tolerance = 0.1
//! sensor_count = 12
//! sensing_range = 0.8
//! runs = 10
//! seed = 0
//!
//! [environment]
//! preset = "case1"          # "case1", "case2" or "empty"
//! bounds = [0.0, 0.0, 13.0, 13.0]   # min_x, min_y, max_x, max_y
//! start = [0.0, 0.0]
//! goal = [12.0, 12.0]
//! time_step = 1.0
//! robot_radius = 0.3
//!
//! # Optional; when present replaces the preset's obstacles.
//! [[environment.obstacles]]
//! center = [1.0, 4.5]
//! radius = 0.3
//! speed = 0.3
//! heading_deg = 0.0
//!
//! [bench]
//! functions = ["sphere", "easom", "three_hump_camel", "booth", "rastrigin", "michalewicz"]
//! dimension = 2
//! runs = 15
//! seed = 0
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use mfba::benchmarks::{FunctionId, DEFAULT_DIMENSION};
use mfba::environment::{Bounds, EnvironmentSpec, Obstacle, Point2, Preset};
use mfba::optimizer::{Algorithm, OptimizerConfig, Schedule, DEFAULT_RHO};
use mfba::perception::SensorConfig;
use mfba::planner::PlannerConfig;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {cause}")]
    Io {
        path: PathBuf,
        cause: std::io::Error,
    },
    #[error("cannot parse configuration: {0}")]
    Parse(toml::de::Error),
    #[error("invalid value for `{key}` ({value}): {reason}")]
    Invalid {
        key: String,
        value: String,
        reason: String,
    },
}

impl ConfigError {
    fn invalid(key: impl Into<String>, value: impl ToString, reason: impl Into<String>) -> Self {
        ConfigError::Invalid {
            key: key.into(),
            value: value.to_string(),
            reason: reason.into(),
        }
    }

    fn from_core(section: &str, err: mfba::Error) -> Self {
        match err {
            mfba::Error::InvalidParameter {
                name,
                value,
                reason,
            } => ConfigError::Invalid {
                key: format!("{section}.{name}"),
                value,
                reason: reason.to_string(),
            },
            other => ConfigError::invalid(section, "", other.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct OptimizerSection {
    population_size: usize,
    f_min: f64,
    f_max: f64,
    alpha: f64,
    gamma: f64,
    sigma: f64,
    initial_loudness: f64,
    initial_pulse_rate: f64,
    max_iterations: usize,
    rho: f64,
    epsilon: f64,
}

impl Default for OptimizerSection {
    fn default() -> Self {
        let d = OptimizerConfig::default();
        OptimizerSection {
            population_size: d.population_size,
            f_min: d.f_min,
            f_max: d.f_max,
            alpha: d.alpha,
            gamma: d.gamma,
            sigma: d.sigma,
            initial_loudness: d.initial_loudness,
            initial_pulse_rate: d.initial_pulse_rate,
            max_iterations: d.max_iterations,
            rho: d.schedule.rho().unwrap_or(DEFAULT_RHO),
            epsilon: d.epsilon,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct PlannerSection {
    algorithm: String,
    step_length: f64,
    waypoint_iterations: usize,
    max_cycles: usize,
    goal_tolerance: f64,
    sensor_count: usize,
    sensing_range: f64,
    runs: usize,
    seed: u64,
}

impl Default for PlannerSection {
    fn default() -> Self {
        let d = PlannerConfig::default();
        PlannerSection {
            algorithm: d.algorithm.as_str().to_string(),
            step_length: d.step_length,
            waypoint_iterations: d.waypoint_iterations,
            max_cycles: d.max_cycles,
            goal_tolerance: d.goal_tolerance,
            sensor_count: d.sensor.sensor_count,
            sensing_range: d.sensor.sensing_range,
            runs: 10,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObstacleEntry {
    center: [f64; 2],
    radius: f64,
    speed: f64,
    heading_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct EnvironmentSection {
    preset: String,
    bounds: [f64; 4],
    start: [f64; 2],
    goal: [f64; 2],
    time_step: f64,
    robot_radius: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    obstacles: Option<Vec<ObstacleEntry>>,
}

impl Default for EnvironmentSection {
    fn default() -> Self {
        let d = EnvironmentSpec::default();
        EnvironmentSection {
            preset: Preset::Case1.name().to_string(),
            bounds: [
                d.bounds.min.x,
                d.bounds.min.y,
                d.bounds.max.x,
                d.bounds.max.y,
            ],
            start: [d.start.x, d.start.y],
            goal: [d.goal.x, d.goal.y],
            time_step: d.time_step,
            robot_radius: d.robot_radius,
            obstacles: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct BenchSection {
    functions: Vec<String>,
    dimension: usize,
    runs: usize,
    seed: u64,
}

impl Default for BenchSection {
    fn default() -> Self {
        BenchSection {
            functions: FunctionId::ALL
                .iter()
                .map(|f| f.name().to_string())
                .collect(),
            dimension: DEFAULT_DIMENSION,
            runs: 15,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ConfigFile {
    optimizer: OptimizerSection,
    planner: PlannerSection,
    environment: EnvironmentSection,
    bench: BenchSection,
}

/// Benchmark harness settings.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchSettings {
    pub functions: Vec<FunctionId>,
    /// Dimension of sphere and Rastrigin; the others are two-dimensional.
    pub dimension: usize,
    pub runs: usize,
    pub seed: u64,
}

/// Validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub optimizer: OptimizerConfig,
    pub planner: PlannerConfig,
    pub environment: EnvironmentSpec,
    pub preset: Preset,
    pub plan_runs: usize,
    pub plan_seed: u64,
    pub bench: BenchSettings,
}

impl Default for Config {
    fn default() -> Self {
        parse_config("").expect("defaults are valid")
    }
}

impl Config {
    pub fn parts(&self) -> (&OptimizerConfig, &PlannerConfig, &EnvironmentSpec) {
        (&self.optimizer, &self.planner, &self.environment)
    }

    /// Replaces the environment's obstacles with those of `preset`.
    pub fn set_preset(&mut self, preset: Preset) {
        self.preset = preset;
        self.environment.obstacles = preset.obstacles();
    }

    /// Full TOML rendering with every key explicit; parsing it back yields an
    /// equal `Config`.
    pub fn to_toml_string(&self) -> String {
        let o = &self.optimizer;
        let p = &self.planner;
        let e = &self.environment;
        let file = ConfigFile {
            optimizer: OptimizerSection {
                population_size: o.population_size,
                f_min: o.f_min,
                f_max: o.f_max,
                alpha: o.alpha,
                gamma: o.gamma,
                sigma: o.sigma,
                initial_loudness: o.initial_loudness,
                initial_pulse_rate: o.initial_pulse_rate,
                max_iterations: o.max_iterations,
                rho: o.schedule.rho().unwrap_or(DEFAULT_RHO),
                epsilon: o.epsilon,
            },
            planner: PlannerSection {
                algorithm: p.algorithm.as_str().to_string(),
                step_length: p.step_length,
                waypoint_iterations: p.waypoint_iterations,
                max_cycles: p.max_cycles,
                goal_tolerance: p.goal_tolerance,
                sensor_count: p.sensor.sensor_count,
                sensing_range: p.sensor.sensing_range,
                runs: self.plan_runs,
                seed: self.plan_seed,
            },
            environment: EnvironmentSection {
                preset: self.preset.name().to_string(),
                bounds: [
                    e.bounds.min.x,
                    e.bounds.min.y,
                    e.bounds.max.x,
                    e.bounds.max.y,
                ],
                start: [e.start.x, e.start.y],
                goal: [e.goal.x, e.goal.y],
                time_step: e.time_step,
                robot_radius: e.robot_radius,
                obstacles: Some(
                    e.obstacles
                        .iter()
                        .map(|o| ObstacleEntry {
                            center: [o.initial_center.x, o.initial_center.y],
                            radius: o.radius,
                            speed: o.speed,
                            heading_deg: o.heading_deg,
                        })
                        .collect(),
                ),
            },
            bench: BenchSection {
                functions: self
                    .bench
                    .functions
                    .iter()
                    .map(|f| f.name().to_string())
                    .collect(),
                dimension: self.bench.dimension,
                runs: self.bench.runs,
                seed: self.bench.seed,
            },
        };
        toml::to_string(&file).expect("configuration serializes")
    }
}

pub fn load_config(path: &Path) -> Result<Config, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|cause| ConfigError::Io {
        path: path.to_path_buf(),
        cause,
    })?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<Config, ConfigError> {
    let file: ConfigFile = toml::from_str(text).map_err(ConfigError::Parse)?;
    resolve(file)
}

fn resolve(file: ConfigFile) -> Result<Config, ConfigError> {
    let o = file.optimizer;
    let optimizer = OptimizerConfig {
        population_size: o.population_size,
        f_min: o.f_min,
        f_max: o.f_max,
        alpha: o.alpha,
        gamma: o.gamma,
        sigma: o.sigma,
        initial_loudness: o.initial_loudness,
        initial_pulse_rate: o.initial_pulse_rate,
        max_iterations: o.max_iterations,
        rng_seed: 0,
        schedule: Schedule::ModifiedFrequency { rho: o.rho },
        epsilon: o.epsilon,
    };
    optimizer
        .validate()
        .map_err(|e| ConfigError::from_core("optimizer", e))?;

    let p = file.planner;
    let algorithm: Algorithm = p.algorithm.parse().map_err(|_| {
        ConfigError::invalid("planner.algorithm", &p.algorithm, "expected `ba` or `mfba`")
    })?;
    let planner = PlannerConfig {
        algorithm,
        optimizer: optimizer.clone(),
        sensor: SensorConfig {
            sensor_count: p.sensor_count,
            sensing_range: p.sensing_range,
        },
        step_length: p.step_length,
        waypoint_iterations: p.waypoint_iterations,
        max_cycles: p.max_cycles,
        goal_tolerance: p.goal_tolerance,
    };
    planner
        .validate()
        .map_err(|e| ConfigError::from_core("planner", e))?;
    if p.runs == 0 {
        return Err(ConfigError::invalid(
            "planner.runs",
            p.runs,
            "must be positive",
        ));
    }

    let e = file.environment;
    let preset: Preset = e.preset.parse().map_err(|_| {
        ConfigError::invalid(
            "environment.preset",
            &e.preset,
            "expected case1, case2 or empty",
        )
    })?;
    let bounds = Bounds::new(
        Point2::new(e.bounds[0], e.bounds[1]),
        Point2::new(e.bounds[2], e.bounds[3]),
    )
    .map_err(|_| {
        ConfigError::invalid(
            "environment.bounds",
            format!("{:?}", e.bounds),
            "expected [min_x, min_y, max_x, max_y] with min < max",
        )
    })?;
    let obstacles = match e.obstacles {
        None => preset.obstacles(),
        Some(entries) => entries
            .iter()
            .enumerate()
            .map(|(i, o)| {
                Obstacle::new(
                    Point2::new(o.center[0], o.center[1]),
                    o.radius,
                    o.speed,
                    o.heading_deg,
                )
                .map_err(|err| ConfigError::from_core(&format!("environment.obstacles[{i}]"), err))
            })
            .collect::<Result<Vec<_>, _>>()?,
    };
    let environment = EnvironmentSpec {
        bounds,
        start: Point2::new(e.start[0], e.start[1]),
        goal: Point2::new(e.goal[0], e.goal[1]),
        obstacles,
        time_step: e.time_step,
        robot_radius: e.robot_radius,
    };
    environment
        .validate()
        .map_err(|err| ConfigError::from_core("environment", err))?;

    let b = file.bench;
    let functions = b
        .functions
        .iter()
        .map(|name| {
            name.parse::<FunctionId>().map_err(|_| {
                ConfigError::invalid("bench.functions", name, "unknown benchmark function")
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    if b.dimension == 0 {
        return Err(ConfigError::invalid(
            "bench.dimension",
            b.dimension,
            "must be positive",
        ));
    }
    if b.runs < 2 {
        return Err(ConfigError::invalid(
            "bench.runs",
            b.runs,
            "need at least 2 runs",
        ));
    }

    Ok(Config {
        optimizer,
        planner,
        environment,
        preset,
        plan_runs: p.runs,
        plan_seed: p.seed,
        bench: BenchSettings {
            functions,
            dimension: b.dimension,
            runs: b.runs,
            seed: b.seed,
        },
    })
}
