//! Bat Algorithm engine.
//!
//! Every bat carries a position, a velocity, a pulse frequency, a loudness and a
//! pulse-emission rate. One iteration moves each bat relative to the current
//! global best, optionally replaces the move by a short random walk around the
//! global best, and accepts the candidate with a probability tied to the bat's
//! loudness. Accepted moves make the bat quieter and raise its pulse rate.
//!
//! Two frequency schedules are supported. [`Schedule::StandardBeta`] draws the
//! frequency mixing factor uniformly from `[0, 1]`. [`Schedule::ModifiedFrequency`]
//! makes it grow with the normalized iteration index, `(t / T) * exp(-rho * r)`,
//! so the swarm starts with low frequencies (wide exploration) and ends with
//! high ones.
//!
//! All randomness comes from a single [`ChaCha8Rng`] seeded with
//! [`OptimizerConfig::rng_seed`], so a run is reproducible across platforms and
//! builds.

use rand::distributions::{Distribution, Open01, Uniform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Default decay exponent of the modified frequency schedule.
pub const DEFAULT_RHO: f64 = 0.01;

/// Attempts made to draw an initial position inside a ball constraint before
/// falling back to projecting the last draw onto it.
const MAX_REJECTION_DRAWS: usize = 10_000;

/// Generator used for every stochastic decision of the engine.
pub type SwarmRng = ChaCha8Rng;

/// Frequency mixing schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Schedule {
    /// beta ~ U[0, 1] every time.
    StandardBeta,
    /// beta = (t / T) * exp(-rho * r), r ~ U(0, 1).
    ModifiedFrequency { rho: f64 },
}

impl Schedule {
    pub fn rho(&self) -> Option<f64> {
        match self {
            Schedule::StandardBeta => None,
            Schedule::ModifiedFrequency { rho } => Some(*rho),
        }
    }
}

/// The two algorithm variants compared throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Ba,
    Mfba,
}

impl Algorithm {
    pub const ALL: [Algorithm; 2] = [Algorithm::Ba, Algorithm::Mfba];

    pub fn schedule(self, rho: f64) -> Schedule {
        match self {
            Algorithm::Ba => Schedule::StandardBeta,
            Algorithm::Mfba => Schedule::ModifiedFrequency { rho },
        }
    }

    /// Short identifier used on the command line and in file names.
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Ba => "ba",
            Algorithm::Mfba => "mfba",
        }
    }

    /// Human-readable column label.
    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Ba => "Standard BA",
            Algorithm::Mfba => "MFBA",
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ba" => Ok(Algorithm::Ba),
            "mfba" => Ok(Algorithm::Mfba),
            _ => Err(Error::invalid("algorithm", s, "expected `ba` or `mfba`")),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub population_size: usize,
    pub f_min: f64,
    pub f_max: f64,
    /// Loudness decay factor, `0 < alpha < 1`.
    pub alpha: f64,
    /// Pulse-rate growth rate, `gamma > 0`.
    pub gamma: f64,
    /// Random-walk scale.
    pub sigma: f64,
    pub initial_loudness: f64,
    pub initial_pulse_rate: f64,
    pub max_iterations: usize,
    pub rng_seed: u64,
    pub schedule: Schedule,
    /// Regularizer of the `1 / (distance + epsilon)` fitness.
    pub epsilon: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            population_size: 5,
            f_min: 0.0,
            f_max: 10.0,
            alpha: 0.98,
            gamma: 0.8,
            sigma: 0.3,
            initial_loudness: 1.0,
            initial_pulse_rate: 0.5,
            max_iterations: 500,
            rng_seed: 0,
            schedule: Schedule::ModifiedFrequency { rho: DEFAULT_RHO },
            epsilon: 0.001,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population_size == 0 {
            return Err(Error::invalid(
                "population_size",
                self.population_size,
                "must be positive",
            ));
        }
        if !self.f_min.is_finite() {
            return Err(Error::invalid("f_min", self.f_min, "must be finite"));
        }
        if !self.f_max.is_finite() || self.f_max < self.f_min {
            return Err(Error::invalid(
                "f_max",
                self.f_max,
                "must be finite and >= f_min",
            ));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::invalid(
                "alpha",
                self.alpha,
                "must satisfy 0 < alpha < 1",
            ));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::invalid("gamma", self.gamma, "must be positive"));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::invalid("sigma", self.sigma, "must be positive"));
        }
        if !(self.initial_loudness > 0.0 && self.initial_loudness.is_finite()) {
            return Err(Error::invalid(
                "initial_loudness",
                self.initial_loudness,
                "must be positive",
            ));
        }
        if !(0.0..=1.0).contains(&self.initial_pulse_rate) {
            return Err(Error::invalid(
                "initial_pulse_rate",
                self.initial_pulse_rate,
                "must lie in [0, 1]",
            ));
        }
        if let Schedule::ModifiedFrequency { rho } = self.schedule {
            if !(rho > 0.0 && rho.is_finite()) {
                return Err(Error::invalid("rho", rho, "must be positive"));
            }
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::invalid("epsilon", self.epsilon, "must be positive"));
        }
        Ok(())
    }

    /// Same configuration with the schedule of `algorithm`, keeping the current
    /// `rho` when there is one.
    pub fn with_algorithm(mut self, algorithm: Algorithm) -> Self {
        let rho = self.schedule.rho().unwrap_or(DEFAULT_RHO);
        self.schedule = algorithm.schedule(rho);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }
}

/// Ball constraint intersected with the search box.
#[derive(Debug, Clone, PartialEq)]
pub struct Ball {
    pub center: Vec<f64>,
    pub radius: f64,
}

/// Axis-aligned box, optionally intersected with a ball whose center lies in
/// the box.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpace {
    lower: Vec<f64>,
    upper: Vec<f64>,
    ball: Option<Ball>,
}

impl SearchSpace {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::invalid("dimension", 0, "must be positive"));
        }
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                actual: upper.len(),
            });
        }
        for (lo, hi) in lower.iter().zip(&upper) {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::invalid(
                    "bounds",
                    format!("[{lo}, {hi}]"),
                    "every coordinate needs finite lower < upper",
                ));
            }
        }
        Ok(SearchSpace {
            lower,
            upper,
            ball: None,
        })
    }

    /// The same interval in every coordinate.
    pub fn uniform(dimension: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower; dimension], vec![upper; dimension])
    }

    pub fn with_ball(mut self, center: Vec<f64>, radius: f64) -> Result<Self> {
        self.check_dimension(&center)?;
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::invalid("ball radius", radius, "must be positive"));
        }
        if !self.box_contains(&center) {
            return Err(Error::invalid(
                "ball center",
                format!("{center:?}"),
                "must lie inside the search box",
            ));
        }
        self.ball = Some(Ball { center, radius });
        Ok(self)
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn ball(&self) -> Option<&Ball> {
        self.ball.as_ref()
    }

    pub fn check_dimension(&self, x: &[f64]) -> Result<()> {
        if x.len() == self.dimension() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dimension(),
                actual: x.len(),
            })
        }
    }

    fn box_contains(&self, x: &[f64]) -> bool {
        x.iter()
            .zip(self.lower.iter().zip(&self.upper))
            .all(|(v, (lo, hi))| lo <= v && v <= hi)
    }

    fn ball_contains(&self, x: &[f64]) -> bool {
        match &self.ball {
            None => true,
            Some(ball) => squared_distance(x, &ball.center) <= ball.radius * ball.radius,
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dimension() && self.box_contains(x) && self.ball_contains(x)
    }

    /// Clamps coordinate-wise into the box, then pulls the point radially onto
    /// the ball if it lies outside it. Box and ball are both convex and the ball
    /// center is in the box, so the result stays inside the box.
    pub fn clamp(&self, x: &mut [f64]) {
        for ((v, lo), hi) in x.iter_mut().zip(&self.lower).zip(&self.upper) {
            *v = v.clamp(*lo, *hi);
        }
        if let Some(ball) = &self.ball {
            let dist = squared_distance(x, &ball.center).sqrt();
            if dist > ball.radius {
                let scale = ball.radius / dist;
                for (v, c) in x.iter_mut().zip(&ball.center) {
                    *v = c + (*v - c) * scale;
                }
            }
        }
    }

    /// Uniform draw from the box; with a ball, draws outside it are rejected
    /// and redrawn.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let mut x = self.sample_box(rng);
        let mut draws = 1;
        while !self.ball_contains(&x) && draws < MAX_REJECTION_DRAWS {
            x = self.sample_box(rng);
            draws += 1;
        }
        self.clamp(&mut x);
        x
    }

    fn sample_box<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| lo + rng.gen::<f64>() * (hi - lo))
            .collect()
    }
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Something the swarm can minimize.
pub trait Objective {
    fn evaluate(&mut self, x: &[f64]) -> Result<f64>;
}

impl<F: FnMut(&[f64]) -> f64> Objective for F {
    fn evaluate(&mut self, x: &[f64]) -> Result<f64> {
        Ok(self(x))
    }
}

fn evaluate_checked<O: Objective + ?Sized>(objective: &mut O, x: &[f64]) -> Result<f64> {
    let value = objective.evaluate(x)?;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFiniteObjective(value))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bat {
    pub position: Vec<f64>,
    pub velocity: Vec<f64>,
    pub frequency: f64,
    pub loudness: f64,
    pub pulse_rate: f64,
    pub value: f64,
    /// Number of accepted moves so far.
    pub accepted: usize,
}

/// Population plus global best and iteration counter.
#[derive(Debug, Clone)]
pub struct Swarm {
    pub bats: Vec<Bat>,
    pub best_position: Vec<f64>,
    pub best_value: f64,
    /// Number of completed iterations.
    pub iteration: usize,
    pub evaluations: usize,
}

impl Swarm {
    /// Uniform random positions, zero velocities, initial loudness and pulse
    /// rate from the config. Each bat is evaluated once.
    pub fn initialize<O, R>(
        config: &OptimizerConfig,
        space: &SearchSpace,
        objective: &mut O,
        rng: &mut R,
    ) -> Result<Self>
    where
        O: Objective + ?Sized,
        R: Rng + ?Sized,
    {
        config.validate()?;
        let dim = space.dimension();
        let mut bats = Vec::with_capacity(config.population_size);
        for _ in 0..config.population_size {
            let position = space.sample(rng);
            let value = evaluate_checked(objective, &position)?;
            bats.push(Bat {
                position,
                velocity: vec![0.0; dim],
                frequency: config.f_min,
                loudness: config.initial_loudness,
                pulse_rate: config.initial_pulse_rate,
                value,
                accepted: 0,
            });
        }
        let best = bats
            .iter()
            .min_by(|a, b| a.value.total_cmp(&b.value))
            .expect("population_size > 0");
        Ok(Swarm {
            best_position: best.position.clone(),
            best_value: best.value,
            evaluations: bats.len(),
            bats,
            iteration: 0,
        })
    }

    pub fn mean_loudness(&self) -> f64 {
        self.bats.iter().map(|b| b.loudness).sum::<f64>() / self.bats.len() as f64
    }

    /// One iteration over every bat.
    pub fn step<O, R>(
        &mut self,
        objective: &mut O,
        config: &OptimizerConfig,
        space: &SearchSpace,
        rng: &mut R,
    ) -> Result<()>
    where
        O: Objective + ?Sized,
        R: Rng + ?Sized,
    {
        let t = self.iteration + 1;
        let horizon = config.max_iterations.max(t);
        for i in 0..self.bats.len() {
            let beta = compute_beta(config.schedule, t, horizon, rng);
            let moved = update_bat(&self.bats[i], &self.best_position, config, beta)?;
            let mut candidate = moved.position;
            space.clamp(&mut candidate);
            let bat = &mut self.bats[i];
            bat.frequency = moved.frequency;
            bat.velocity = moved.velocity;

            if rng.gen::<f64>() > bat.pulse_rate {
                let mean_loudness =
                    self.bats.iter().map(|b| b.loudness).sum::<f64>() / self.bats.len() as f64;
                candidate =
                    local_random_walk(&self.best_position, mean_loudness, config.sigma, space, rng);
            }

            let value = evaluate_checked(objective, &candidate)?;
            self.evaluations += 1;

            let bat = &mut self.bats[i];
            if rng.gen::<f64>() < bat.loudness && value < bat.value {
                bat.position = candidate.clone();
                bat.value = value;
                bat.accepted += 1;
                update_loudness_and_pulse(bat, config, t);
            }
            if value < self.best_value {
                self.best_value = value;
                self.best_position = candidate;
            }
        }
        self.iteration = t;
        Ok(())
    }
}

/// Frequency mixing factor for iteration `t` of `horizon`, always in `[0, 1]`.
pub fn compute_beta<R: Rng + ?Sized>(
    schedule: Schedule,
    t: usize,
    horizon: usize,
    rng: &mut R,
) -> f64 {
    match schedule {
        Schedule::StandardBeta => rng.gen::<f64>(),
        Schedule::ModifiedFrequency { rho } => {
            let r: f64 = Open01.sample(rng);
            let progress = if horizon == 0 {
                1.0
            } else {
                t as f64 / horizon as f64
            };
            (progress * (-rho * r).exp()).clamp(0.0, 1.0)
        }
    }
}

/// Frequency, velocity and unclamped position after one flight.
#[derive(Debug, Clone, PartialEq)]
pub struct Flight {
    pub frequency: f64,
    pub velocity: Vec<f64>,
    pub position: Vec<f64>,
}

/// `f = f_min + (f_max - f_min) * beta`, `v += (x - x*) * f`, `x += v`.
pub fn update_bat(
    bat: &Bat,
    global_best: &[f64],
    config: &OptimizerConfig,
    beta: f64,
) -> Result<Flight> {
    if global_best.len() != bat.position.len() {
        return Err(Error::DimensionMismatch {
            expected: bat.position.len(),
            actual: global_best.len(),
        });
    }
    let frequency = config.f_min + (config.f_max - config.f_min) * beta;
    let velocity: Vec<f64> = bat
        .velocity
        .iter()
        .zip(bat.position.iter().zip(global_best))
        .map(|(v, (x, best))| v + (x - best) * frequency)
        .collect();
    let position = bat
        .position
        .iter()
        .zip(&velocity)
        .map(|(x, v)| x + v)
        .collect();
    Ok(Flight {
        frequency,
        velocity,
        position,
    })
}

/// `x_base + sigma * eps * mean_loudness` with an independent `eps ~ U[-1, 1]`
/// per coordinate, clamped into `space`.
pub fn local_random_walk<R: Rng + ?Sized>(
    base: &[f64],
    mean_loudness: f64,
    sigma: f64,
    space: &SearchSpace,
    rng: &mut R,
) -> Vec<f64> {
    let unit = Uniform::new_inclusive(-1.0, 1.0);
    let scale = sigma * mean_loudness;
    let mut x: Vec<f64> = base.iter().map(|b| b + scale * unit.sample(rng)).collect();
    space.clamp(&mut x);
    x
}

/// `A <- alpha * A`, `r <- r0 * (1 - exp(-gamma * t))`.
pub fn update_loudness_and_pulse(bat: &mut Bat, config: &OptimizerConfig, t: usize) {
    bat.loudness *= config.alpha;
    bat.pulse_rate = pulse_rate_at(config, t);
}

pub fn pulse_rate_at(config: &OptimizerConfig, t: usize) -> f64 {
    config.initial_pulse_rate * (1.0 - (-config.gamma * t as f64).exp())
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub best_position: Vec<f64>,
    pub best_value: f64,
    /// Best value after initialization followed by the best value after each
    /// iteration; `max_iterations + 1` entries.
    pub value_history: Vec<f64>,
    pub evaluations: usize,
}

/// Initializes a swarm and runs `config.max_iterations` iterations with a
/// fresh generator seeded from `config.rng_seed`.
pub fn optimize<O: Objective>(
    mut objective: O,
    space: &SearchSpace,
    config: &OptimizerConfig,
) -> Result<OptimizationResult> {
    let mut rng = SwarmRng::seed_from_u64(config.rng_seed);
    let mut swarm = Swarm::initialize(config, space, &mut objective, &mut rng)?;
    let mut value_history = Vec::with_capacity(config.max_iterations + 1);
    value_history.push(swarm.best_value);
    for _ in 0..config.max_iterations {
        swarm.step(&mut objective, config, space, &mut rng)?;
        value_history.push(swarm.best_value);
    }
    Ok(OptimizationResult {
        best_position: swarm.best_position,
        best_value: swarm.best_value,
        value_history,
        evaluations: swarm.evaluations,
    })
}
