//! Standard test functions and the multi-run comparison harness.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::optimizer::{optimize, Algorithm, Objective, OptimizerConfig, SearchSpace};
use crate::{Error, Result};

/// Steepness of the Michalewicz function.
pub const MICHALEWICZ_STEEPNESS: u32 = 10;

/// Relative difference of two means below which they count as equal.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Default dimension for the functions whose dimension is free.
pub const DEFAULT_DIMENSION: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FunctionId {
    Sphere,
    Easom,
    ThreeHumpCamel,
    Booth,
    Rastrigin,
    Michalewicz,
}

impl FunctionId {
    pub const ALL: [FunctionId; 6] = [
        FunctionId::Sphere,
        FunctionId::Easom,
        FunctionId::ThreeHumpCamel,
        FunctionId::Booth,
        FunctionId::Rastrigin,
        FunctionId::Michalewicz,
    ];

    /// `F1` .. `F6`.
    pub fn label(self) -> &'static str {
        match self {
            FunctionId::Sphere => "F1",
            FunctionId::Easom => "F2",
            FunctionId::ThreeHumpCamel => "F3",
            FunctionId::Booth => "F4",
            FunctionId::Rastrigin => "F5",
            FunctionId::Michalewicz => "F6",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FunctionId::Sphere => "sphere",
            FunctionId::Easom => "easom",
            FunctionId::ThreeHumpCamel => "three_hump_camel",
            FunctionId::Booth => "booth",
            FunctionId::Rastrigin => "rastrigin",
            FunctionId::Michalewicz => "michalewicz",
        }
    }

    fn fixed_dimension(self) -> Option<usize> {
        match self {
            FunctionId::Sphere | FunctionId::Rastrigin => None,
            _ => Some(2),
        }
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FunctionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase();
        FunctionId::ALL
            .into_iter()
            .find(|id| id.name() == s || id.label().eq_ignore_ascii_case(&s))
            .ok_or_else(|| Error::invalid("function", s, "unknown benchmark function"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Characteristic {
    Unimodal,
    Multimodal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkFunction {
    id: FunctionId,
    space: SearchSpace,
    known_fmin: f64,
    characteristic: Characteristic,
}

impl BenchmarkFunction {
    /// The function in `dimension` dimensions. Only sphere and Rastrigin accept
    /// a dimension other than 2.
    pub fn new(id: FunctionId, dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::invalid("dimension", dimension, "must be positive"));
        }
        if let Some(fixed) = id.fixed_dimension() {
            if fixed != dimension {
                return Err(Error::invalid(
                    "dimension",
                    dimension,
                    "this function is two-dimensional",
                ));
            }
        }
        let (lower, upper, known_fmin, characteristic) = match id {
            FunctionId::Sphere => (-5.12, 5.12, 0.0, Characteristic::Unimodal),
            FunctionId::Easom => (-100.0, 100.0, -1.0, Characteristic::Unimodal),
            FunctionId::ThreeHumpCamel => (-5.0, 5.0, 0.0, Characteristic::Multimodal),
            FunctionId::Booth => (-10.0, 10.0, 0.0, Characteristic::Unimodal),
            FunctionId::Rastrigin => (-5.12, 5.12, 0.0, Characteristic::Multimodal),
            FunctionId::Michalewicz => (0.0, PI, -1.8013, Characteristic::Multimodal),
        };
        Ok(BenchmarkFunction {
            id,
            space: SearchSpace::uniform(dimension, lower, upper)?,
            known_fmin,
            characteristic,
        })
    }

    /// Two-dimensional instance.
    pub fn standard(id: FunctionId) -> Self {
        Self::new(id, DEFAULT_DIMENSION).expect("every function supports two dimensions")
    }

    pub fn id(&self) -> FunctionId {
        self.id
    }

    pub fn dimension(&self) -> usize {
        self.space.dimension()
    }

    pub fn space(&self) -> &SearchSpace {
        &self.space
    }

    pub fn known_fmin(&self) -> f64 {
        self.known_fmin
    }

    pub fn characteristic(&self) -> Characteristic {
        self.characteristic
    }

    /// A global minimizer. Michalewicz's first coordinate is only known
    /// numerically.
    pub fn optimum(&self) -> Vec<f64> {
        match self.id {
            FunctionId::Sphere | FunctionId::Rastrigin => vec![0.0; self.dimension()],
            FunctionId::Easom => vec![PI, PI],
            FunctionId::ThreeHumpCamel => vec![0.0, 0.0],
            FunctionId::Booth => vec![1.0, 3.0],
            FunctionId::Michalewicz => vec![2.202_905_520_172_6, PI / 2.0],
        }
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        self.space.check_dimension(x)?;
        for (index, ((v, lo), hi)) in x
            .iter()
            .zip(self.space.lower())
            .zip(self.space.upper())
            .enumerate()
        {
            if !(lo <= v && v <= hi) {
                return Err(Error::OutOfBounds {
                    index,
                    value: *v,
                    lower: *lo,
                    upper: *hi,
                });
            }
        }
        Ok(evaluate_unchecked(self.id, x))
    }
}

impl Objective for BenchmarkFunction {
    fn evaluate(&mut self, x: &[f64]) -> Result<f64> {
        BenchmarkFunction::evaluate(self, x)
    }
}

fn evaluate_unchecked(id: FunctionId, x: &[f64]) -> f64 {
    match id {
        FunctionId::Sphere => x.iter().map(|v| v * v).sum(),
        FunctionId::Easom => {
            let (x1, x2) = (x[0], x[1]);
            -x1.cos() * x2.cos() * (-(x1 - PI).powi(2) - (x2 - PI).powi(2)).exp()
        }
        FunctionId::ThreeHumpCamel => {
            let (x1, x2) = (x[0], x[1]);
            2.0 * x1 * x1 - 1.05 * x1.powi(4) + x1.powi(6) / 6.0 + x1 * x2 + x2 * x2
        }
        FunctionId::Booth => {
            let (x1, x2) = (x[0], x[1]);
            (x1 + 2.0 * x2 - 7.0).powi(2) + (2.0 * x1 + x2 - 5.0).powi(2)
        }
        FunctionId::Rastrigin => {
            10.0 * x.len() as f64
                + x.iter()
                    .map(|v| v * v - 10.0 * (2.0 * PI * v).cos())
                    .sum::<f64>()
        }
        FunctionId::Michalewicz => -x
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let inner = ((i + 1) as f64 * v * v / PI).sin();
                v.sin() * inner.powi(2 * MICHALEWICZ_STEEPNESS as i32)
            })
            .sum::<f64>(),
    }
}

/// Significance mark of one comparison row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Significance {
    /// MFBA mean strictly better.
    Better,
    /// Means equal within [`TIE_TOLERANCE`].
    Equal,
    /// MFBA mean worse.
    Worse,
}

impl Significance {
    pub fn mark(self) -> &'static str {
        match self {
            Significance::Better => "+",
            Significance::Equal => "-",
            Significance::Worse => ".",
        }
    }

    pub fn from_mark(mark: &str) -> Option<Self> {
        match mark {
            "+" => Some(Significance::Better),
            "-" => Some(Significance::Equal),
            "." => Some(Significance::Worse),
            _ => None,
        }
    }
}

impl fmt::Display for Significance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mark())
    }
}

/// Summary of the final best values of several independent runs.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialStatistics {
    pub best: f64,
    pub worst: f64,
    pub mean: f64,
    /// Sample standard deviation (divisor `n - 1`).
    pub standard_deviation: f64,
    pub run_count: usize,
    pub significance_mark: Option<Significance>,
}

impl TrialStatistics {
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("run_count", 0, "need at least one value"));
        }
        let n = values.len() as f64;
        let best = values.iter().copied().fold(f64::INFINITY, f64::min);
        let worst = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        // Sorting first makes the sums independent of run order.
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mean = (sorted.iter().sum::<f64>() / n).clamp(best, worst);
        let standard_deviation = if values.len() < 2 {
            0.0
        } else {
            (sorted.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        };
        Ok(TrialStatistics {
            best,
            worst,
            mean,
            standard_deviation,
            run_count: values.len(),
            significance_mark: None,
        })
    }

    /// Standard error of the mean.
    pub fn standard_error(&self) -> f64 {
        self.standard_deviation / (self.run_count as f64).sqrt()
    }
}

/// Final best values of `run_count` independent runs seeded
/// `base_seed, base_seed + 1, ...`, in seed order.
pub fn run_values(
    function: &BenchmarkFunction,
    algorithm: Algorithm,
    config: &OptimizerConfig,
    run_count: usize,
    base_seed: u64,
) -> Result<Vec<f64>> {
    let config = config.clone().with_algorithm(algorithm);
    config.validate()?;
    (0..run_count)
        .into_par_iter()
        .map(|run| {
            let cfg = config.clone().with_seed(base_seed.wrapping_add(run as u64));
            optimize(function.clone(), function.space(), &cfg).map(|r| r.best_value)
        })
        .collect()
}

pub fn run_trials(
    function: &BenchmarkFunction,
    algorithm: Algorithm,
    config: &OptimizerConfig,
    run_count: usize,
    base_seed: u64,
) -> Result<TrialStatistics> {
    if run_count < 2 {
        return Err(Error::invalid(
            "run_count",
            run_count,
            "need at least 2 runs",
        ));
    }
    TrialStatistics::from_values(&run_values(
        function, algorithm, config, run_count, base_seed,
    )?)
}

/// Mark for the MFBA row given the BA and MFBA statistics of one function.
pub fn compare(ba: &TrialStatistics, mfba: &TrialStatistics) -> Result<Significance> {
    if ba.run_count != mfba.run_count {
        return Err(Error::MismatchedTrials(format!(
            "run counts differ ({} vs {})",
            ba.run_count, mfba.run_count
        )));
    }
    let scale = ba.mean.abs().max(mfba.mean.abs());
    let diff = mfba.mean - ba.mean;
    if diff == 0.0 || diff.abs() < TIE_TOLERANCE * scale {
        Ok(Significance::Equal)
    } else if diff < 0.0 {
        Ok(Significance::Better)
    } else {
        Ok(Significance::Worse)
    }
}

/// BA and MFBA statistics for one function, MFBA row marked.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub function: FunctionId,
    pub ba: TrialStatistics,
    pub mfba: TrialStatistics,
}

pub fn compare_on(
    function: &BenchmarkFunction,
    config: &OptimizerConfig,
    run_count: usize,
    base_seed: u64,
) -> Result<ComparisonRow> {
    let ba = run_trials(function, Algorithm::Ba, config, run_count, base_seed)?;
    let mut mfba = run_trials(function, Algorithm::Mfba, config, run_count, base_seed)?;
    mfba.significance_mark = Some(compare(&ba, &mfba)?);
    Ok(ComparisonRow {
        function: function.id(),
        ba,
        mfba,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn f(id: FunctionId) -> BenchmarkFunction {
        BenchmarkFunction::standard(id)
    }

    #[test]
    fn optima_match_known_minima() {
        for id in FunctionId::ALL {
            let func = f(id);
            let value = func.evaluate(&func.optimum()).unwrap();
            let tol = if id == FunctionId::Michalewicz {
                1e-4
            } else {
                1e-6
            };
            assert!(
                (value - func.known_fmin()).abs() <= tol,
                "{id}: {value} vs {}",
                func.known_fmin()
            );
        }
    }

    #[test]
    fn worked_values() {
        assert_eq!(f(FunctionId::Sphere).evaluate(&[0.0, 0.0]).unwrap(), 0.0);
        assert_abs_diff_eq!(
            f(FunctionId::Easom).evaluate(&[PI, PI]).unwrap(),
            -1.0,
            epsilon = 1e-15
        );
        assert_eq!(f(FunctionId::Booth).evaluate(&[1.0, 3.0]).unwrap(), 0.0);
        let r5 = BenchmarkFunction::new(FunctionId::Rastrigin, 5).unwrap();
        assert_eq!(r5.evaluate(&[0.0; 5]).unwrap(), 0.0);
        assert_eq!(f(FunctionId::Sphere).evaluate(&[3.0, 4.0]).unwrap(), 25.0);
        // 10 * 2 + (1 - 10) + (1 - 10)
        assert_abs_diff_eq!(
            f(FunctionId::Rastrigin).evaluate(&[1.0, -1.0]).unwrap(),
            2.0,
            epsilon = 1e-12
        );
        // 2 - 1.05 + 1/6 + 1 + 1
        assert_abs_diff_eq!(
            f(FunctionId::ThreeHumpCamel).evaluate(&[1.0, 1.0]).unwrap(),
            2.0 - 1.05 + 1.0 / 6.0 + 2.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn michalewicz_optimum_is_a_local_minimum() {
        let func = f(FunctionId::Michalewicz);
        let opt = func.optimum();
        let at = func.evaluate(&opt).unwrap();
        for dx in [-1e-3, 1e-3] {
            for axis in 0..2 {
                let mut x = opt.clone();
                x[axis] += dx;
                if func.space().contains(&x) {
                    assert!(func.evaluate(&x).unwrap() >= at);
                }
            }
        }
    }

    #[test]
    fn evaluate_rejects_bad_input() {
        let func = f(FunctionId::Booth);
        assert!(matches!(
            func.evaluate(&[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            func.evaluate(&[11.0, 0.0]),
            Err(Error::OutOfBounds { index: 0, .. })
        ));
        assert!(BenchmarkFunction::new(FunctionId::Easom, 3).is_err());
        assert!(BenchmarkFunction::new(FunctionId::Sphere, 0).is_err());
    }

    #[test]
    fn table_metadata() {
        assert_eq!(f(FunctionId::Easom).space().lower(), &[-100.0, -100.0]);
        assert_eq!(f(FunctionId::Michalewicz).space().upper(), &[PI, PI]);
        assert_eq!(
            f(FunctionId::ThreeHumpCamel).characteristic(),
            Characteristic::Multimodal
        );
        assert_eq!(
            f(FunctionId::Booth).characteristic(),
            Characteristic::Unimodal
        );
        assert_eq!("F5".parse::<FunctionId>().unwrap(), FunctionId::Rastrigin);
        assert_eq!("booth".parse::<FunctionId>().unwrap(), FunctionId::Booth);
    }

    #[test]
    fn statistics_of_identical_values() {
        let stats = TrialStatistics::from_values(&[0.25, 0.25]).unwrap();
        assert_eq!(stats.best, 0.25);
        assert_eq!(stats.worst, 0.25);
        assert_eq!(stats.mean, 0.25);
        assert_eq!(stats.standard_deviation, 0.0);
    }

    #[test]
    fn sample_standard_deviation() {
        let stats = TrialStatistics::from_values(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(stats.mean, 2.5);
        // sum of squares 5, divided by 3
        assert_abs_diff_eq!(
            stats.standard_deviation,
            (5.0f64 / 3.0).sqrt(),
            epsilon = 1e-15
        );
    }

    #[test]
    fn constant_objective_trials() {
        // Easom far from its basin is flat to machine precision; use a
        // deliberately constant objective through the optimizer instead.
        let cfg = OptimizerConfig {
            max_iterations: 10,
            ..Default::default()
        };
        let space = SearchSpace::uniform(2, -1.0, 1.0).unwrap();
        let values: Vec<f64> = (0..2)
            .map(|s| {
                crate::optimizer::optimize(|_: &[f64]| 1.5, &space, &cfg.clone().with_seed(s))
                    .unwrap()
                    .best_value
            })
            .collect();
        let stats = TrialStatistics::from_values(&values).unwrap();
        assert_eq!((stats.best, stats.worst, stats.mean), (1.5, 1.5, 1.5));
        assert_eq!(stats.standard_deviation, 0.0);
    }

    #[test]
    fn trials_are_reproducible() {
        let cfg = OptimizerConfig {
            max_iterations: 50,
            ..Default::default()
        };
        let func = f(FunctionId::Sphere);
        let a = run_trials(&func, Algorithm::Mfba, &cfg, 4, 17).unwrap();
        let b = run_trials(&func, Algorithm::Mfba, &cfg, 4, 17).unwrap();
        assert_eq!(a, b);
        assert!(run_trials(&func, Algorithm::Ba, &cfg, 1, 17).is_err());
    }

    fn stats_with_mean(mean: f64) -> TrialStatistics {
        TrialStatistics {
            best: mean,
            worst: mean,
            mean,
            standard_deviation: 0.0,
            run_count: 15,
            significance_mark: None,
        }
    }

    #[test]
    fn significance_marks() {
        let ba = stats_with_mean(0.0146);
        let mfba = stats_with_mean(0.0048);
        assert_eq!(compare(&ba, &mfba).unwrap(), Significance::Better);
        assert_eq!(compare(&ba, &ba).unwrap(), Significance::Equal);
        assert_eq!(compare(&mfba, &ba).unwrap(), Significance::Worse);
        assert_eq!(
            compare(&stats_with_mean(0.0), &stats_with_mean(0.0)).unwrap(),
            Significance::Equal
        );
        assert_eq!(
            compare(&stats_with_mean(1.0), &stats_with_mean(1.0 + 1e-12)).unwrap(),
            Significance::Equal
        );
        let mut other = stats_with_mean(0.1);
        other.run_count = 10;
        assert!(compare(&ba, &other).is_err());
    }

    proptest! {
        #[test]
        fn statistics_are_ordered_and_permutation_invariant(
            mut values in prop::collection::vec(-1e6f64..1e6, 2..40),
            rotate in 0usize..40,
        ) {
            let stats = TrialStatistics::from_values(&values).unwrap();
            prop_assert!(stats.best <= stats.mean && stats.mean <= stats.worst);
            prop_assert!(stats.standard_deviation >= 0.0);
            let k = rotate % values.len();
            values.rotate_left(k);
            values.reverse();
            prop_assert_eq!(TrialStatistics::from_values(&values).unwrap(), stats);
        }

        #[test]
        fn easom_is_symmetric(delta in -50.0f64..50.0) {
            let func = f(FunctionId::Easom);
            let a = func.evaluate(&[PI + delta, PI - delta]).unwrap();
            let b = func.evaluate(&[PI - delta, PI + delta]).unwrap();
            prop_assert_eq!(a, b);
        }

        #[test]
        fn sphere_and_rastrigin_are_even(x in -5.12f64..5.12, y in -5.12f64..5.12) {
            for id in [FunctionId::Sphere, FunctionId::Rastrigin] {
                let func = f(id);
                prop_assert_eq!(func.evaluate(&[x, y]).unwrap(), func.evaluate(&[-x, -y]).unwrap());
            }
        }
    }
}
