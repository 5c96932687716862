use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::ScaledCholesky;
use crate::moments::{SampleCovariances, SampleMoments};
use crate::series::TimeSeriesSet;

/// Least-squares fit of one target's difference series on all components,
/// `dX_target = f + sum_j a_j X_j + noise`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModelFit {
    pub target: usize,
    /// `a_{target, j}` for every component `j`.
    pub coeffs: DVector<f64>,
    pub intercept: f64,
    /// Residual variance `RSS / dof`, in squared difference-series units.
    pub resid_var: f64,
    /// Sampling covariance of `[f, a_1, ..., a_d]`.
    pub coeff_cov: DMatrix<f64>,
    /// Noise intensity per unit time, `resid_var * k * dt`.
    pub g_hat: f64,
    pub n_eff: usize,
    pub dof: usize,
    pub covariances: SampleCovariances,
}

impl LinearModelFit {
    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// Standard error of coefficient `a_j`.
    pub fn coeff_se(&self, j: usize) -> f64 {
        self.coeff_cov[(j + 1, j + 1)].max(0.0).sqrt()
    }

    /// Sample variance of the target, `C_ii`.
    pub fn target_variance(&self) -> f64 {
        self.covariances.c[(self.target, self.target)]
    }
}

/// Fits the linear model for `target` using difference lag `k`.
pub fn fit_linear_model(set: &TimeSeriesSet, target: usize, k: usize) -> Result<LinearModelFit> {
    set.check_index(target)?;
    let moments = SampleMoments::compute(set, k)?;
    fit_from_covariances(moments.for_target(target), k as f64 * set.dt())
}

/// Fits from precomputed covariances. `step` is the time span of one
/// difference (`k * dt` for series, the gap for panel data).
pub fn fit_from_covariances(cov: SampleCovariances, step: f64) -> Result<LinearModelFit> {
    let d = cov.c.nrows();
    let n_eff = cov.n_eff;
    if n_eff <= d + 1 {
        return Err(Error::TooShort {
            len: n_eff,
            vars: d,
            needed: d + 2,
        });
    }
    let dof = n_eff - d - 1;

    let factor = ScaledCholesky::new(&cov.c)?;
    let coeffs = factor.solve(&cov.cd);
    let intercept = cov.diff_mean - coeffs.dot(&cov.means);

    let explained = coeffs.dot(&cov.cd);
    let rss = (cov.divisor * (cov.diff_var - explained)).max(0.0);
    let resid_var = rss / dof as f64;

    // (Xc' Xc)^{-1} where Xc' Xc = divisor * C
    let gram_inv = factor.inverse() / cov.divisor;
    let gm = &gram_inv * &cov.means;
    let mut coeff_cov = DMatrix::zeros(d + 1, d + 1);
    coeff_cov[(0, 0)] = resid_var * (1.0 / n_eff as f64 + cov.means.dot(&gm));
    for j in 0..d {
        coeff_cov[(0, j + 1)] = -resid_var * gm[j];
        coeff_cov[(j + 1, 0)] = -resid_var * gm[j];
        for m in 0..d {
            coeff_cov[(j + 1, m + 1)] = resid_var * gram_inv[(j, m)];
        }
    }
    for j in 0..=d {
        for m in 0..j {
            let avg = 0.5 * (coeff_cov[(j, m)] + coeff_cov[(m, j)]);
            coeff_cov[(j, m)] = avg;
            coeff_cov[(m, j)] = avg;
        }
    }

    Ok(LinearModelFit {
        target: cov.target,
        coeffs,
        intercept,
        resid_var,
        coeff_cov,
        g_hat: resid_var * step,
        n_eff,
        dof,
        covariances: cov,
    })
}
