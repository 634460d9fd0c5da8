//! `bench`, `plan` and `compare` workloads.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use mfba::benchmarks::{compare_on, run_trials, BenchmarkFunction, FunctionId, DEFAULT_DIMENSION};
use mfba::environment::Preset;
use mfba::optimizer::Algorithm;
use mfba::planner::{best_of_runs, MissionBatch};

use crate::config::{load_config, Config};
use crate::report::{self, BenchRow};
use crate::{svg, trace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgoChoice {
    Ba,
    Mfba,
    Both,
}

impl AlgoChoice {
    pub fn algorithms(self) -> Vec<Algorithm> {
        match self {
            AlgoChoice::Ba => vec![Algorithm::Ba],
            AlgoChoice::Mfba => vec![Algorithm::Mfba],
            AlgoChoice::Both => Algorithm::ALL.to_vec(),
        }
    }
}

impl From<Algorithm> for AlgoChoice {
    fn from(a: Algorithm) -> Self {
        match a {
            Algorithm::Ba => AlgoChoice::Ba,
            Algorithm::Mfba => AlgoChoice::Mfba,
        }
    }
}

/// Command-line overrides shared by every command.
#[derive(Debug, Clone, Default)]
pub struct Options {
    pub config: Option<PathBuf>,
    pub algo: Option<AlgoChoice>,
    pub runs: Option<usize>,
    pub seed: Option<u64>,
    pub preset: Option<Preset>,
    pub out: PathBuf,
}

impl Options {
    pub fn load(&self) -> Result<Config> {
        let mut cfg = match &self.config {
            Some(path) => load_config(path)?,
            None => Config::default(),
        };
        if let Some(p) = self.preset {
            cfg.set_preset(p);
        }
        Ok(cfg)
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("cannot create directory {}", dir.display()))
}

fn function_for(id: FunctionId, dimension: usize) -> Result<BenchmarkFunction> {
    let dim = match id {
        FunctionId::Sphere | FunctionId::Rastrigin => dimension,
        _ => DEFAULT_DIMENSION,
    };
    Ok(BenchmarkFunction::new(id, dim)?)
}

#[derive(Debug)]
pub struct BenchOutcome {
    pub rows: Vec<BenchRow>,
    pub files: Vec<PathBuf>,
}

/// Runs the selected benchmark functions and writes `bench.csv` and
/// `bench.txt`. With both algorithms the MFBA row carries a significance mark.
pub fn bench(opts: &Options) -> Result<BenchOutcome> {
    let cfg = opts.load()?;
    let settings = &cfg.bench;
    if settings.functions.is_empty() {
        bail!("no benchmark functions selected");
    }
    let runs = opts.runs.unwrap_or(settings.runs);
    if runs < 2 {
        bail!("invalid value for `--runs` ({runs}): need at least 2 runs");
    }
    let seed = opts.seed.unwrap_or(settings.seed);
    let choice = opts.algo.unwrap_or(AlgoChoice::Both);

    let mut rows = Vec::new();
    for &id in &settings.functions {
        let function = function_for(id, settings.dimension)?;
        if choice == AlgoChoice::Both {
            let row = compare_on(&function, &cfg.optimizer, runs, seed)?;
            rows.push(BenchRow {
                function: id,
                algorithm: Algorithm::Ba,
                stats: row.ba,
            });
            rows.push(BenchRow {
                function: id,
                algorithm: Algorithm::Mfba,
                stats: row.mfba,
            });
        } else {
            for algorithm in choice.algorithms() {
                let stats = run_trials(&function, algorithm, &cfg.optimizer, runs, seed)?;
                rows.push(BenchRow {
                    function: id,
                    algorithm,
                    stats,
                });
            }
        }
    }

    ensure_dir(&opts.out)?;
    let csv_path = opts.out.join("bench.csv");
    report::write_bench_csv(&rows, create(&csv_path)?)
        .with_context(|| format!("cannot write {}", csv_path.display()))?;
    let txt_path = opts.out.join("bench.txt");
    write_text(&txt_path, &report::bench_text(&rows, runs))?;
    Ok(BenchOutcome {
        rows,
        files: vec![csv_path, txt_path],
    })
}

#[derive(Debug)]
pub struct PlanOutcome {
    pub batches: Vec<(Algorithm, MissionBatch)>,
    pub files: Vec<PathBuf>,
}

fn plan_algorithms(cfg: &Config, opts: &Options, algorithms: &[Algorithm]) -> Result<PlanOutcome> {
    let runs = opts.runs.unwrap_or(cfg.plan_runs);
    if runs == 0 {
        bail!("invalid value for `--runs` ({runs}): must be positive");
    }
    let seed = opts.seed.unwrap_or(cfg.plan_seed);
    let epsilon = cfg.optimizer.epsilon;
    ensure_dir(&opts.out)?;

    let mut batches = Vec::new();
    let mut files = Vec::new();
    for &algorithm in algorithms {
        let planner = cfg.planner.clone().with_algorithm(algorithm);
        let batch = best_of_runs(&cfg.environment, &planner, runs, seed)?;
        let tag = algorithm.as_str();

        for (i, t) in batch.traces.iter().enumerate() {
            let path = opts.out.join(format!("{tag}_run{:02}.csv", i + 1));
            trace::write_trace(&t.records, create(&path)?)
                .with_context(|| format!("cannot write {}", path.display()))?;
            files.push(path);
        }

        let path = opts.out.join(format!("{tag}_summary.csv"));
        report::write_summary_csv(&batch, epsilon, create(&path)?)
            .with_context(|| format!("cannot write {}", path.display()))?;
        files.push(path);

        let path = opts.out.join(format!("{tag}_fitness.csv"));
        report::write_fitness_csv(&batch, epsilon, create(&path)?)
            .with_context(|| format!("cannot write {}", path.display()))?;
        files.push(path);

        let label = format!("{} on {}", algorithm.label(), cfg.preset.name());
        let path = opts.out.join(format!("{tag}_summary.txt"));
        write_text(&path, &report::summary_text(&label, &batch, epsilon))?;
        files.push(path);

        // Shortest successful run, or the first run when none succeeded.
        let shown = batch.best_trace().unwrap_or(&batch.traces[0]);
        let path = opts.out.join(format!("{tag}_best_path.svg"));
        let title = format!("{label}, seed {}", shown.seed);
        write_text(
            &path,
            &svg::render(
                &cfg.environment,
                &shown.records,
                planner.sensor.sensing_range,
                &title,
            ),
        )?;
        files.push(path);

        batches.push((algorithm, batch));
    }
    Ok(PlanOutcome { batches, files })
}

/// Runs the planner `runs` times per selected algorithm and writes per-run
/// traces, summaries and a plot of the best path.
pub fn plan(opts: &Options) -> Result<PlanOutcome> {
    let cfg = opts.load()?;
    let choice = opts.algo.unwrap_or(cfg.planner.algorithm.into());
    plan_algorithms(&cfg, opts, &choice.algorithms())
}

/// Plans with both algorithms on the same seeds and writes
/// `comparison.csv` / `comparison.txt` next to the per-algorithm outputs.
pub fn compare(opts: &Options) -> Result<PlanOutcome> {
    if let Some(choice) = opts.algo {
        if choice != AlgoChoice::Both {
            bail!("compare runs both algorithms; drop `--algo` or pass `--algo both`");
        }
    }
    let cfg = opts.load()?;
    let mut outcome = plan_algorithms(&cfg, opts, &Algorithm::ALL)?;
    let epsilon = cfg.optimizer.epsilon;
    let labels: Vec<&str> = outcome.batches.iter().map(|(a, _)| a.label()).collect();
    let batches: Vec<&MissionBatch> = outcome.batches.iter().map(|(_, b)| b).collect();

    let path = opts.out.join("comparison.csv");
    report::write_comparison_csv(&labels, &batches, epsilon, create(&path)?)
        .with_context(|| format!("cannot write {}", path.display()))?;
    outcome.files.push(path);
    let path = opts.out.join("comparison.txt");
    write_text(&path, &report::comparison_text(&labels, &batches, epsilon))?;
    outcome.files.push(path);
    Ok(outcome)
}
