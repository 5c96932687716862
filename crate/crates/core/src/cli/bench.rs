use std::time::Instant;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::dynamics::{simulate, LinearSDE};
use crate::error::{Error, Result};
use crate::graph::{all_pairs, AnalysisOptions, Mode};

/// Wall-time target for the all-pairs computation at d = 30, N = 10^4.
pub const TARGET_SECONDS: f64 = 1.0;
/// Above this the benchmark is reported as failed rather than as a warning.
pub const WARN_SECONDS: f64 = 2.0;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub d: usize,
    pub n: usize,
    pub repetitions: usize,
    pub mode: Mode,
    pub workers: usize,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            d: 30,
            n: 10_000,
            repetitions: 5,
            mode: Mode::Multivariate,
            workers: 0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub d: usize,
    pub n: usize,
    pub repetitions: usize,
    pub mode: Mode,
    pub workers: usize,
    pub relations: usize,
    pub self_terms: usize,
    pub median_seconds: f64,
    pub min_seconds: f64,
    pub seconds: Vec<f64>,
    pub target_seconds: f64,
    /// `"pass"`, `"warn"` (within 2x of the target) or `"fail"`.
    pub status: String,
}

/// Synthetic benchmark system: a chain `x_{i-1} -> x_i` plus a weaker
/// skip link `x_{i-3} -> x_i`, unit decay and unit noise.
pub fn bench_system(d: usize) -> Result<LinearSDE> {
    let mut a = -DMatrix::identity(d, d);
    for i in 1..d {
        a[(i, i - 1)] = 0.5;
        if i >= 3 {
            a[(i, i - 3)] = 0.2;
        }
    }
    LinearSDE::with_drift_and_noise(a, DMatrix::identity(d, d))
}

/// Times [`all_pairs`] (significance and normalization on) on simulated
/// data. Data generation is excluded from the timings.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    if cfg.d < 2 {
        return Err(Error::InvalidArgument("bench needs d >= 2".into()));
    }
    if cfg.repetitions == 0 {
        return Err(Error::InvalidArgument("bench needs at least one repetition".into()));
    }
    let sde = bench_system(cfg.d)?;
    let set = simulate(&sde, &vec![0.0; cfg.d], cfg.n, 0.01, cfg.seed, None)?.into_series_set()?;
    let opts = AnalysisOptions {
        k: 1,
        alpha: 0.05,
        normalize: true,
        mode: cfg.mode,
        workers: cfg.workers,
    };
    let mut seconds = Vec::with_capacity(cfg.repetitions);
    for _ in 0..cfg.repetitions {
        let start = Instant::now();
        let fm = all_pairs(&set, &opts)?;
        seconds.push(start.elapsed().as_secs_f64());
        std::hint::black_box(fm);
    }
    let mut sorted = seconds.clone();
    sorted.sort_by(f64::total_cmp);
    let mid = sorted.len() / 2;
    let median_seconds = if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    };
    let status = if median_seconds < TARGET_SECONDS {
        "pass"
    } else if median_seconds < WARN_SECONDS {
        "warn"
    } else {
        "fail"
    };
    Ok(BenchReport {
        d: cfg.d,
        n: cfg.n,
        repetitions: cfg.repetitions,
        mode: cfg.mode,
        workers: cfg.workers,
        relations: cfg.d * (cfg.d - 1),
        self_terms: cfg.d,
        median_seconds,
        min_seconds: sorted[0],
        seconds,
        target_seconds: TARGET_SECONDS,
        status: status.to_string(),
    })
}
