//! Sample covariances between the series and their forward-difference series.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::series::{PanelPairs, TimeSeriesSet};

/// Normalization constant used for every covariance entry.
///
/// Flow values do not depend on this choice; it only fixes the reported
/// covariances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CovarianceDivisor {
    /// `1 / (n_eff - 1)`.
    #[default]
    Unbiased,
    /// `1 / n_eff`.
    Population,
}

impl CovarianceDivisor {
    fn value(self, n_eff: usize) -> f64 {
        match self {
            CovarianceDivisor::Unbiased => (n_eff - 1) as f64,
            CovarianceDivisor::Population => n_eff as f64,
        }
    }
}

/// Second moments of a set and of all its difference series at once.
///
/// `cross[(i, j)]` is the covariance between `X_j` and the difference series
/// of `X_i`, so row `i` is the right-hand side of target `i`'s regression.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMoments {
    pub means: DVector<f64>,
    pub cov: DMatrix<f64>,
    pub cross: DMatrix<f64>,
    pub diff_means: DVector<f64>,
    pub diff_var: DVector<f64>,
    pub n_eff: usize,
    pub divisor: f64,
}

/// Covariances needed by a single target's estimators.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleCovariances {
    pub target: usize,
    /// `C_ij` over the aligned samples.
    pub c: DMatrix<f64>,
    /// `C_{j,d(target)}` for every `j`.
    pub cd: DVector<f64>,
    pub means: DVector<f64>,
    pub diff_mean: f64,
    pub diff_var: f64,
    pub n_eff: usize,
    pub divisor: f64,
}

/// Largest admissible difference lag for `n` samples of `d` variables.
pub fn max_lag(n: usize, d: usize) -> usize {
    n.saturating_sub(d + 2)
}

/// Forward difference `(x[n+k] - x[n]) / (k dt)` for `n < len - k`.
pub fn difference_series(x: &[f64], k: usize, dt: f64) -> Vec<f64> {
    let scale = 1.0 / (k as f64 * dt);
    x.iter()
        .zip(&x[k..])
        .map(|(a, b)| (b - a) * scale)
        .collect()
}

impl SampleMoments {
    pub fn compute(set: &TimeSeriesSet, k: usize) -> Result<Self> {
        Self::compute_with(set, k, CovarianceDivisor::Unbiased)
    }

    pub fn compute_with(set: &TimeSeriesSet, k: usize, divisor: CovarianceDivisor) -> Result<Self> {
        let max = max_lag(set.len(), set.dim());
        if k == 0 || k > max {
            return Err(Error::KTooLarge { k, max });
        }
        let n_eff = set.len() - k;
        let x: Vec<&[f64]> = set.values().iter().map(|r| &r[..n_eff]).collect();
        let dx: Vec<Vec<f64>> = set
            .values()
            .iter()
            .map(|r| difference_series(r, k, set.dt()))
            .collect();
        Ok(Self::from_aligned(&x, &dx, divisor))
    }

    /// Moments of panel pairs, differenced over `dt_gap` and taken across
    /// the replicate index.
    pub fn from_panel(pairs: &PanelPairs) -> Self {
        let x: Vec<&[f64]> = pairs.x0().iter().map(Vec::as_slice).collect();
        let scale = 1.0 / pairs.dt_gap();
        let dx: Vec<Vec<f64>> = pairs
            .x0()
            .iter()
            .zip(pairs.x1())
            .map(|(a, b)| a.iter().zip(b).map(|(u, v)| (v - u) * scale).collect())
            .collect();
        Self::from_aligned(&x, &dx, CovarianceDivisor::Unbiased)
    }

    fn from_aligned(x: &[&[f64]], dx: &[Vec<f64>], divisor: CovarianceDivisor) -> Self {
        let d = x.len();
        let n_eff = x[0].len();
        let div = divisor.value(n_eff);

        let (means, xc): (Vec<f64>, Vec<Vec<f64>>) = x.iter().map(|r| center(r)).unzip();
        let (diff_means, dc): (Vec<f64>, Vec<Vec<f64>>) = dx.iter().map(|r| center(r)).unzip();

        let mut cov = DMatrix::zeros(d, d);
        for i in 0..d {
            for j in i..d {
                let v = dot(&xc[i], &xc[j]) / div;
                cov[(i, j)] = v;
                cov[(j, i)] = v;
            }
        }
        let cross = DMatrix::from_fn(d, d, |i, j| dot(&dc[i], &xc[j]) / div);
        let diff_var = DVector::from_fn(d, |i, _| dot(&dc[i], &dc[i]) / div);

        SampleMoments {
            means: DVector::from_vec(means),
            cov,
            cross,
            diff_means: DVector::from_vec(diff_means),
            diff_var,
            n_eff,
            divisor: div,
        }
    }

    pub fn dim(&self) -> usize {
        self.means.len()
    }

    pub fn for_target(&self, target: usize) -> SampleCovariances {
        SampleCovariances {
            target,
            c: self.cov.clone(),
            cd: self.cross.row(target).transpose(),
            means: self.means.clone(),
            diff_mean: self.diff_means[target],
            diff_var: self.diff_var[target],
            n_eff: self.n_eff,
            divisor: self.divisor,
        }
    }
}

/// Covariances of all series over the first `N - k` samples and of each
/// series with the difference series of `target`.
pub fn sample_covariance_matrix(set: &TimeSeriesSet, k: usize, target: usize) -> Result<SampleCovariances> {
    set.check_index(target)?;
    Ok(SampleMoments::compute(set, k)?.for_target(target))
}

fn center(x: &[f64]) -> (f64, Vec<f64>) {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    (mean, x.iter().map(|v| v - mean).collect())
}

// Four independent accumulators; the summation order is fixed, so results
// are reproducible bit for bit.
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let chunks = a.len() / 4;
    for c in 0..chunks {
        let o = 4 * c;
        acc[0] += a[o] * b[o];
        acc[1] += a[o + 1] * b[o + 1];
        acc[2] += a[o + 2] * b[o + 2];
        acc[3] += a[o + 3] * b[o + 3];
    }
    let mut tail = 0.0;
    for o in 4 * chunks..a.len() {
        tail += a[o] * b[o];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}
