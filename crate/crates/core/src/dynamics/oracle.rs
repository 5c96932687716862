//! Exact information flow of a stationary linear SDE.
//!
//! For `dX = (f + A X) dt + B dW` with stationary covariance `S`, the flow
//! from `X_j` to `X_i` is `a_ij S_ij / S_ii`. The marginal entropy of a
//! Gaussian `X_i` is `H_i = ln(2 pi e S_ii) / 2`, so `dH_i/dt` splits into
//! the incoming flows, the self term `a_ii` and the noise term
//! `(B B^T)_ii / (2 S_ii)`. At stationarity `dH_i/dt = 0`, i.e. the
//! `i`-th diagonal entry of the Lyapunov equation divided by `2 S_ii`.

use nalgebra::DMatrix;
use serde::Serialize;

use super::{stationary_covariance, LinearSDE};
use crate::error::{Error, Result};

/// Entropy budget of one component at stationarity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoreticalBudget {
    pub target: usize,
    /// `(source, T_{source->target})` for every other component.
    pub flows: Vec<(usize, f64)>,
    pub self_term: f64,
    pub noise_term: f64,
    /// Sum of all terms; zero up to rounding.
    pub residual: f64,
}

/// All theoretical flows in `T[target][source]` orientation, self terms on
/// the diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoreticalMatrix {
    pub names: Vec<String>,
    pub flows: DMatrix<f64>,
    pub noise: Vec<f64>,
    pub sigma: DMatrix<f64>,
    pub budget_residuals: Vec<f64>,
}

fn check_index(sde: &LinearSDE, index: usize) -> Result<()> {
    if index < sde.dim() {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange {
            index,
            len: sde.dim(),
        })
    }
}

/// `T_{source->target} = a_ts S_ts / S_tt`; exactly zero when `a_ts = 0`.
pub fn theoretical_flow(sde: &LinearSDE, source: usize, target: usize) -> Result<f64> {
    check_index(sde, source)?;
    check_index(sde, target)?;
    if source == target {
        return Err(Error::SameIndex(source));
    }
    let sigma = stationary_covariance(sde)?.sigma;
    Ok(flow_from_sigma(sde, &sigma, source, target))
}

fn flow_from_sigma(sde: &LinearSDE, sigma: &DMatrix<f64>, source: usize, target: usize) -> f64 {
    let a = sde.drift()[(target, source)];
    if a == 0.0 {
        return 0.0;
    }
    a * sigma[(target, source)] / sigma[(target, target)]
}

fn budget_from_sigma(sde: &LinearSDE, sigma: &DMatrix<f64>, q: &DMatrix<f64>, target: usize) -> TheoreticalBudget {
    let flows: Vec<(usize, f64)> = (0..sde.dim())
        .filter(|&j| j != target)
        .map(|j| (j, flow_from_sigma(sde, sigma, j, target)))
        .collect();
    let self_term = sde.drift()[(target, target)];
    let noise_term = q[(target, target)] / (2.0 * sigma[(target, target)]);
    let residual = flows.iter().map(|(_, t)| t).sum::<f64>() + self_term + noise_term;
    TheoreticalBudget {
        target,
        flows,
        self_term,
        noise_term,
        residual,
    }
}

/// Incoming flows, self term and noise term of `target`.
pub fn theoretical_budget(sde: &LinearSDE, target: usize) -> Result<TheoreticalBudget> {
    check_index(sde, target)?;
    let sigma = stationary_covariance(sde)?.sigma;
    Ok(budget_from_sigma(sde, &sigma, &sde.q(), target))
}

/// Every flow and budget of the system from a single Lyapunov solve.
pub fn theoretical_matrix(sde: &LinearSDE) -> Result<TheoreticalMatrix> {
    let sigma = stationary_covariance(sde)?.sigma;
    let q = sde.q();
    let d = sde.dim();
    let mut flows = DMatrix::zeros(d, d);
    let mut noise = Vec::with_capacity(d);
    let mut budget_residuals = Vec::with_capacity(d);
    for i in 0..d {
        let b = budget_from_sigma(sde, &sigma, &q, i);
        for &(j, t) in &b.flows {
            flows[(i, j)] = t;
        }
        flows[(i, i)] = b.self_term;
        noise.push(b.noise_term);
        budget_residuals.push(b.residual);
    }
    Ok(TheoreticalMatrix {
        names: sde.names().to_vec(),
        flows,
        noise,
        sigma,
        budget_residuals,
    })
}
