//! Tabular outputs: benchmark statistics, mission summaries and side-by-side
//! comparisons, each as CSV plus a fixed-width text rendering.

use std::fmt::Write as _;
use std::io::Write;

use mfba::benchmarks::{FunctionId, TrialStatistics};
use mfba::optimizer::Algorithm;
use mfba::planner::{FitnessStatistics, MissionBatch};

pub const BENCH_COLUMNS: [&str; 7] = [
    "function",
    "algorithm",
    "best",
    "worst",
    "mean",
    "sd",
    "significant",
];
pub const SUMMARY_COLUMNS: [&str; 7] = [
    "run",
    "seed",
    "path_length_m",
    "cycles",
    "collision",
    "reached",
    "run_fitness",
];
pub const FITNESS_STATISTICS: [&str; 4] = ["minimum", "maximum", "standard_deviation", "mean"];

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub function: FunctionId,
    pub algorithm: Algorithm,
    pub stats: TrialStatistics,
}

fn mark(stats: &TrialStatistics) -> &'static str {
    stats.significance_mark.map_or("", |m| m.mark())
}

pub fn write_bench_csv<W: Write>(rows: &[BenchRow], writer: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(BENCH_COLUMNS)?;
    for r in rows {
        out.write_record([
            r.function.label().to_string(),
            r.algorithm.as_str().to_string(),
            r.stats.best.to_string(),
            r.stats.worst.to_string(),
            r.stats.mean.to_string(),
            r.stats.standard_deviation.to_string(),
            mark(&r.stats).to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn bench_text(rows: &[BenchRow], run_count: usize) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "Benchmark results over {run_count} runs");
    let _ = writeln!(
        s,
        "'+' MFBA better, '-' equal, '.' worse (mean of final best values)"
    );
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "{:<22} {:<12} {:>13} {:>13} {:>13} {:>13} {:>4}",
        "Function", "Algorithm", "Best", "Worst", "Mean", "SD", "Sig"
    );
    for r in rows {
        let _ = writeln!(
            s,
            "{:<22} {:<12} {:>13.4e} {:>13.4e} {:>13.4e} {:>13.4e} {:>4}",
            format!("{} {}", r.function.label(), r.function.name()),
            r.algorithm.label(),
            r.stats.best,
            r.stats.worst,
            r.stats.mean,
            r.stats.standard_deviation,
            mark(&r.stats)
        );
    }
    s
}

fn statistic(stats: Option<&FitnessStatistics>, name: &str) -> Option<f64> {
    let s = stats?;
    Some(match name {
        "minimum" => s.minimum,
        "maximum" => s.maximum,
        "standard_deviation" => s.standard_deviation,
        "mean" => s.mean,
        _ => return None,
    })
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// One row per run, in seed order.
pub fn write_summary_csv<W: Write>(
    batch: &MissionBatch,
    epsilon: f64,
    writer: W,
) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(SUMMARY_COLUMNS)?;
    for (i, t) in batch.traces.iter().enumerate() {
        let s = &t.summary;
        out.write_record([
            (i + 1).to_string(),
            t.seed.to_string(),
            s.path_length.to_string(),
            s.cycle_count.to_string(),
            s.collision.to_string(),
            s.reached.to_string(),
            t.run_fitness(epsilon).to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Min/max/SD/mean of run fitness over the successful runs. Values are left
/// empty when fewer than two runs succeeded.
pub fn write_fitness_csv<W: Write>(
    batch: &MissionBatch,
    epsilon: f64,
    writer: W,
) -> csv::Result<()> {
    let stats = batch.fitness_statistics(epsilon);
    let mut out = csv::Writer::from_writer(writer);
    out.write_record(["statistic", "value"])?;
    for name in FITNESS_STATISTICS {
        out.write_record([name.to_string(), opt(statistic(stats.as_ref(), name))])?;
    }
    out.write_record([
        "successful_runs".to_string(),
        batch.fitness_values(epsilon).len().to_string(),
    ])?;
    out.flush()?;
    Ok(())
}

pub fn summary_text(label: &str, batch: &MissionBatch, epsilon: f64) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{label}: {} runs", batch.traces.len());
    let _ = writeln!(s);
    let _ = writeln!(
        s,
        "{:>4} {:>6} {:>12} {:>7} {:>10} {:>8} {:>12} {:>10}",
        "Run", "Seed", "Length (m)", "Cycles", "Collision", "Reached", "Fitness", "Time (ms)"
    );
    for (i, t) in batch.traces.iter().enumerate() {
        let m = &t.summary;
        let _ = writeln!(
            s,
            "{:>4} {:>6} {:>12.4} {:>7} {:>10} {:>8} {:>12.6} {:>10.1}",
            i + 1,
            t.seed,
            m.path_length,
            m.cycle_count,
            m.collision,
            m.reached,
            t.run_fitness(epsilon),
            t.elapsed.as_secs_f64() * 1e3
        );
    }
    let _ = writeln!(s);
    match batch.fitness_statistics(epsilon) {
        Some(f) => {
            let _ = writeln!(s, "Fitness over {} successful runs", f.count);
            let _ = writeln!(s, "  minimum  {:.6}", f.minimum);
            let _ = writeln!(s, "  maximum  {:.6}", f.maximum);
            let _ = writeln!(s, "  SD       {:.6}", f.standard_deviation);
            let _ = writeln!(s, "  mean     {:.6}", f.mean);
        }
        None => {
            let _ = writeln!(s, "Fewer than two successful runs; no fitness statistics");
        }
    }
    if let Some(best) = batch.best_trace() {
        let _ = writeln!(
            s,
            "Best path {:.4} m (seed {})",
            best.summary.path_length, best.seed
        );
    }
    s
}

/// Rows of a side-by-side comparison: statistic name then one value per batch.
pub fn comparison_rows(batches: &[&MissionBatch], epsilon: f64) -> Vec<(String, Vec<Option<f64>>)> {
    let stats: Vec<_> = batches
        .iter()
        .map(|b| b.fitness_statistics(epsilon))
        .collect();
    let mut rows: Vec<(String, Vec<Option<f64>>)> = FITNESS_STATISTICS
        .iter()
        .map(|name| {
            (
                name.to_string(),
                stats.iter().map(|s| statistic(s.as_ref(), name)).collect(),
            )
        })
        .collect();
    rows.push((
        "best_path_length_m".to_string(),
        batches
            .iter()
            .map(|b| b.best_trace().map(|t| t.summary.path_length))
            .collect(),
    ));
    rows.push((
        "successful_runs".to_string(),
        batches
            .iter()
            .map(|b| Some(b.fitness_values(epsilon).len() as f64))
            .collect(),
    ));
    rows
}

pub fn write_comparison_csv<W: Write>(
    labels: &[&str],
    batches: &[&MissionBatch],
    epsilon: f64,
    writer: W,
) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    let mut header = vec!["statistic"];
    header.extend_from_slice(labels);
    out.write_record(&header)?;
    for (name, values) in comparison_rows(batches, epsilon) {
        let mut row = vec![name];
        row.extend(values.into_iter().map(opt));
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

pub fn comparison_text(labels: &[&str], batches: &[&MissionBatch], epsilon: f64) -> String {
    let mut s = String::new();
    let _ = write!(s, "{:<20}", "Statistic");
    for l in labels {
        let _ = write!(s, " {l:>14}");
    }
    let _ = writeln!(s);
    for (name, values) in comparison_rows(batches, epsilon) {
        let _ = write!(s, "{name:<20}");
        for v in values {
            match v {
                Some(x) => {
                    let _ = write!(s, " {x:>14.6}");
                }
                None => {
                    let _ = write!(s, " {:>14}", "n/a");
                }
            }
        }
        let _ = writeln!(s);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use mfba::benchmarks::Significance;

    fn stats(values: &[f64], mark: Option<Significance>) -> TrialStatistics {
        let mut s = TrialStatistics::from_values(values).unwrap();
        s.significance_mark = mark;
        s
    }

    #[test]
    fn bench_csv_columns_and_marks() {
        let rows = vec![
            BenchRow {
                function: FunctionId::Booth,
                algorithm: Algorithm::Ba,
                stats: stats(&[1.0, 2.0, 3.0], None),
            },
            BenchRow {
                function: FunctionId::Booth,
                algorithm: Algorithm::Mfba,
                stats: stats(&[0.5, 1.0, 1.5], Some(Significance::Better)),
            },
        ];
        let mut buf = Vec::new();
        write_bench_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(
            lines[0],
            "function,algorithm,best,worst,mean,sd,significant"
        );
        assert_eq!(lines[1], "F4,ba,1,3,2,1,");
        assert_eq!(lines[2], "F4,mfba,0.5,1.5,1,0.5,+");
        let table = bench_text(&rows, 3);
        assert!(table.contains("F4 booth"));
        assert!(table.contains("Standard BA"));
    }
}
