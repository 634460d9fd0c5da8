//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any criterion fails.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};

use mfba::benchmarks::{run_values, BenchmarkFunction, FunctionId, TrialStatistics};
use mfba::environment::{EnvironmentSpec, Obstacle, Point2, Preset};
use mfba::optimizer::{
    compute_beta, optimize, pulse_rate_at, Algorithm, OptimizerConfig, Schedule, SearchSpace,
    Swarm, SwarmRng,
};
use mfba::perception::{build_gap_vector, GapVector, SensoryVector};
use mfba::planner::{best_of_runs, run_mission, Mode, PlannerConfig};
use mfba_cli::commands::{self, AlgoChoice, Options};

const OPTIMUM_TOLERANCE: f64 = 1e-6;
const MICHALEWICZ_TOLERANCE: f64 = 1e-4;
const STRAIGHT_LINE: f64 = 16.9705;
const CASE1_FACTOR: f64 = 1.10;
const CASE2_FACTOR: f64 = 1.15;
const MISSION_RUNS: usize = 10;
const BENCH_RUNS: usize = 15;
const REQUIRED_TREND_WINS: usize = 4;
/// Two means are indistinguishable when they differ by at most this many
/// standard errors of the difference.
const INDISTINGUISHABLE_SE: f64 = 2.0;
const INVARIANT_TOLERANCE: f64 = 1e-12;
const STEP_TOLERANCE: f64 = 1e-9;
const RANDOM_MISSIONS: usize = 100;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn criterion_1() -> Outcome {
    let mut worst = Vec::new();
    let mut pass = true;
    for id in FunctionId::ALL {
        let f = BenchmarkFunction::standard(id);
        let err = (f.evaluate(&f.optimum()).unwrap() - f.known_fmin()).abs();
        let tol = if id == FunctionId::Michalewicz {
            MICHALEWICZ_TOLERANCE
        } else {
            OPTIMUM_TOLERANCE
        };
        pass &= err <= tol;
        worst.push(format!("{} {err:.1e}", id.label()));
    }
    outcome(pass, format!("|f(x*) - fmin|: {}", worst.join(", ")))
}

fn brute_force_gap(vs: &[bool]) -> Vec<bool> {
    let n = vs.len();
    (0..n).map(|i| vs[i] || vs[(i + 1) % n]).collect()
}

fn criterion_2() -> Outcome {
    let n = 12;
    let mut mismatches = 0;
    for mask in 0u32..(1 << n) {
        let bits: Vec<bool> = (0..n).map(|i| mask & (1 << i) != 0).collect();
        let vg = build_gap_vector(&SensoryVector::from_bits(bits.clone()));
        if vg.bits() != brute_force_gap(&bits).as_slice() {
            mismatches += 1;
        }
    }
    let worked = build_gap_vector(&SensoryVector::parse("110000111000").unwrap());
    let expected = GapVector::parse("110001111001").unwrap();
    outcome(
        mismatches == 0 && worked == expected,
        format!(
            "{} vectors, {mismatches} mismatches; 110000111000 -> {worked}",
            1 << n
        ),
    )
}

fn criterion_3() -> Outcome {
    let env = EnvironmentSpec::preset(Preset::Empty);
    let mut pass = true;
    let mut lengths = Vec::new();
    for algorithm in Algorithm::ALL {
        let cfg = PlannerConfig::default().with_algorithm(algorithm);
        let upper = STRAIGHT_LINE + 2.0 * cfg.step_length;
        for seed in 0..3 {
            let s = run_mission(&env, &cfg, seed).unwrap().summary;
            pass &= s.reached && !s.collision && (STRAIGHT_LINE..=upper).contains(&s.path_length);
            lengths.push(s.path_length);
        }
    }
    let max = lengths.iter().cloned().fold(f64::MIN, f64::max);
    outcome(
        pass,
        format!("longest path {max:.4} m, band [{STRAIGHT_LINE}, {STRAIGHT_LINE} + 2L]"),
    )
}

fn case_study(preset: Preset, factor: f64, algorithms: &[Algorithm]) -> Outcome {
    let env = EnvironmentSpec::preset(preset);
    let limit = factor * env.straight_line_distance();
    let mut pass = true;
    let mut parts = Vec::new();
    for &algorithm in algorithms {
        let cfg = PlannerConfig::default().with_algorithm(algorithm);
        let batch = best_of_runs(&env, &cfg, MISSION_RUNS, 0).unwrap();
        match batch.best_trace() {
            Some(best) => {
                let s = &best.summary;
                pass &= s.reached && !s.collision && s.path_length <= limit;
                parts.push(format!("{} best {:.4} m", algorithm.label(), s.path_length));
            }
            None => {
                pass = false;
                parts.push(format!("{} no successful run", algorithm.label()));
            }
        }
    }
    outcome(pass, format!("{} (limit {limit:.2} m)", parts.join(", ")))
}

fn criterion_6() -> Outcome {
    let config = OptimizerConfig::default();
    let mut wins = 0;
    let mut marks = Vec::new();
    for id in FunctionId::ALL {
        let f = BenchmarkFunction::standard(id);
        let stats = |alg| {
            TrialStatistics::from_values(&run_values(&f, alg, &config, BENCH_RUNS, 0).unwrap())
                .unwrap()
        };
        let ba = stats(Algorithm::Ba);
        let mfba = stats(Algorithm::Mfba);
        let se = (ba.standard_error().powi(2) + mfba.standard_error().powi(2)).sqrt();
        let diff = mfba.mean - ba.mean;
        let mark = if diff < 0.0 {
            "better"
        } else if diff.abs() <= INDISTINGUISHABLE_SE * se {
            "tie"
        } else {
            "worse"
        };
        if mark != "worse" {
            wins += 1;
        }
        marks.push(format!("{} {mark}", id.label()));
    }
    outcome(
        wins >= REQUIRED_TREND_WINS,
        format!("{wins}/6 not worse ({})", marks.join(", ")),
    )
}

fn check_swarm_invariants(
    config: &OptimizerConfig,
    space: &SearchSpace,
    seed: u64,
) -> Result<(), String> {
    let mut rng = SwarmRng::seed_from_u64(seed);
    let mut objective = |x: &[f64]| {
        x.iter()
            .map(|v| (v - 1.0).powi(2) + 10.0 * (1.0 - (6.0 * v).cos()))
            .sum::<f64>()
    };
    let mut swarm =
        Swarm::initialize(config, space, &mut objective, &mut rng).map_err(|e| e.to_string())?;
    let mut last_accept = vec![0usize; swarm.bats.len()];
    let mut previous_best = swarm.best_value;
    for t in 1..=config.max_iterations {
        let accepted_before: Vec<usize> = swarm.bats.iter().map(|b| b.accepted).collect();
        swarm
            .step(&mut objective, config, space, &mut rng)
            .map_err(|e| e.to_string())?;
        if swarm.best_value > previous_best {
            return Err(format!("best value rose at t={t}"));
        }
        previous_best = swarm.best_value;
        for (i, bat) in swarm.bats.iter().enumerate() {
            if !(config.f_min..=config.f_max).contains(&bat.frequency) {
                return Err(format!("frequency {} outside range", bat.frequency));
            }
            if !space.contains(&bat.position) {
                return Err("bat outside search space".into());
            }
            if bat.accepted != accepted_before[i] {
                last_accept[i] = t;
            }
            let loudness = config.initial_loudness * config.alpha.powi(bat.accepted as i32);
            if (bat.loudness - loudness).abs() > INVARIANT_TOLERANCE {
                return Err(format!(
                    "loudness {} != A0 alpha^{} = {loudness}",
                    bat.loudness, bat.accepted
                ));
            }
            let pulse = if bat.accepted == 0 {
                config.initial_pulse_rate
            } else {
                config.initial_pulse_rate * (1.0 - (-config.gamma * last_accept[i] as f64).exp())
            };
            if (bat.pulse_rate - pulse).abs() > INVARIANT_TOLERANCE {
                return Err(format!("pulse rate {} != {pulse}", bat.pulse_rate));
            }
        }
    }
    Ok(())
}

fn random_environment(rng: &mut SwarmRng) -> EnvironmentSpec {
    let mut env = EnvironmentSpec::default();
    let count = rng.gen_range(0..=6);
    for _ in 0..count {
        let center = Point2::new(rng.gen_range(1.0..12.0), rng.gen_range(1.0..12.0));
        if center.distance(env.start) < 1.0 || center.distance(env.goal) < 1.0 {
            continue;
        }
        let obstacle = Obstacle::new(
            center,
            rng.gen_range(0.1..0.5),
            rng.gen_range(0.0..0.3),
            rng.gen_range(0.0..360.0),
        )
        .unwrap();
        env.obstacles.push(obstacle);
    }
    env
}

fn criterion_7() -> Outcome {
    let mut failures = Vec::new();

    let mut rng = SwarmRng::seed_from_u64(7);
    for schedule in [
        Schedule::StandardBeta,
        Schedule::ModifiedFrequency { rho: 0.01 },
    ] {
        for t in 0..=500 {
            let beta = compute_beta(schedule, t, 500, &mut rng);
            if !(0.0..=1.0).contains(&beta) {
                failures.push(format!("beta {beta} at t={t}"));
            }
        }
    }

    let config = OptimizerConfig::default();
    for t in 0..=1000 {
        let expected = config.initial_pulse_rate * (1.0 - (-config.gamma * t as f64).exp());
        if (pulse_rate_at(&config, t) - expected).abs() > INVARIANT_TOLERANCE {
            failures.push(format!("pulse rate limit at t={t}"));
        }
    }

    let space = SearchSpace::uniform(3, -5.0, 5.0).unwrap();
    for algorithm in Algorithm::ALL {
        for seed in 0..10 {
            let cfg = OptimizerConfig {
                max_iterations: 200,
                ..OptimizerConfig::default()
            }
            .with_algorithm(algorithm);
            if let Err(e) = check_swarm_invariants(&cfg, &space, seed) {
                failures.push(format!("{} seed {seed}: {e}", algorithm.as_str()));
            }
            let f = BenchmarkFunction::standard(FunctionId::Rastrigin);
            let result = optimize(f.clone(), f.space(), &cfg.clone().with_seed(seed)).unwrap();
            if result.value_history.windows(2).any(|w| w[1] > w[0]) {
                failures.push(format!(
                    "{} seed {seed}: history not monotone",
                    algorithm.as_str()
                ));
            }
        }
    }

    let mut mission_rng = SwarmRng::seed_from_u64(2024);
    let mut cycles = 0;
    let mut avoid_cycles = 0;
    for m in 0..RANDOM_MISSIONS {
        let env = random_environment(&mut mission_rng);
        let algorithm = Algorithm::ALL[m % 2];
        let cfg = PlannerConfig {
            step_length: mission_rng.gen_range(0.2..0.8),
            ..PlannerConfig::default()
        }
        .with_algorithm(algorithm);
        let trace = run_mission(&env, &cfg, mission_rng.gen()).unwrap();
        for pair in trace.records.windows(2) {
            let step = pair[0].position.distance(pair[1].position);
            if step > cfg.step_length + STEP_TOLERANCE {
                failures.push(format!("mission {m}: step {step} > L {}", cfg.step_length));
            }
        }
        for r in trace.records.iter().filter(|r| r.mode != Mode::Start) {
            cycles += 1;
            if (r.mode == Mode::Avoid) != r.sensory.any() {
                failures.push(format!(
                    "mission {m} cycle {}: mode {} with {}",
                    r.cycle, r.mode, r.sensory
                ));
            }
            if r.mode == Mode::Avoid {
                avoid_cycles += 1;
            }
        }
    }

    let detail = if failures.is_empty() {
        format!("{RANDOM_MISSIONS} missions, {cycles} cycles ({avoid_cycles} avoid), 20 swarms")
    } else {
        failures.truncate(5);
        failures.join("; ")
    };
    outcome(failures.is_empty(), detail)
}

fn csv_files(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .map(|p| {
            (
                p.file_name().unwrap().to_string_lossy().into_owned(),
                fs::read(&p).unwrap(),
            )
        })
        .collect()
}

fn criterion_8() -> Outcome {
    type Command = fn(&Options) -> anyhow::Result<()>;
    let commands: [(&str, Command, Options); 3] = [
        (
            "bench",
            |o| commands::bench(o).map(|_| ()),
            Options {
                algo: Some(AlgoChoice::Both),
                runs: Some(3),
                seed: Some(11),
                ..Options::default()
            },
        ),
        (
            "plan",
            |o| commands::plan(o).map(|_| ()),
            Options {
                algo: Some(AlgoChoice::Both),
                runs: Some(4),
                seed: Some(5),
                preset: Some(Preset::Case1),
                ..Options::default()
            },
        ),
        (
            "compare",
            |o| commands::compare(o).map(|_| ()),
            Options {
                runs: Some(4),
                seed: Some(9),
                preset: Some(Preset::Case2),
                ..Options::default()
            },
        ),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, run, opts) in commands {
        let outputs: Vec<_> = (0..2)
            .map(|_| {
                let dir = tempfile::tempdir().unwrap();
                let o = Options {
                    out: dir.path().to_path_buf(),
                    ..opts.clone()
                };
                run(&o).unwrap();
                csv_files(dir.path())
            })
            .collect();
        let same = !outputs[0].is_empty() && outputs[0] == outputs[1];
        pass &= same;
        parts.push(format!(
            "{name} {} files {}",
            outputs[0].len(),
            if same { "identical" } else { "differ" }
        ));
    }
    outcome(pass, parts.join(", "))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("benchmark optima", criterion_1),
        ("gap-vector oracle", criterion_2),
        ("no-obstacle mission", criterion_3),
        ("case study 1", || {
            case_study(Preset::Case1, CASE1_FACTOR, &Algorithm::ALL)
        }),
        ("case study 2", || {
            case_study(Preset::Case2, CASE2_FACTOR, &[Algorithm::Mfba])
        }),
        ("MFBA-vs-BA trend", criterion_6),
        ("invariant suites", criterion_7),
        ("determinism", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} criterion {} ({name}): {} [{:.2}s]",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            started.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
