//! All-pairs causality, significance filtering and graph output.

mod causal;
mod emit;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimator::{fit_from_covariances, flow_bivariate, flow_from_fit, normalize_flows, self_from_fit, FlowEstimate};
use crate::moments::SampleMoments;
use crate::series::TimeSeriesSet;

pub use causal::{build_graph, CausalGraph, Edge, SelfLoop};
pub use emit::{emit_dot, emit_json, FLOAT_DIGITS};

/// Orientation stamp carried by every matrix output.
pub const ORIENTATION: &str = "T[target][source]";

/// How each pairwise flow is conditioned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Every flow conditions on all components.
    #[default]
    Multivariate,
    /// Each off-diagonal flow uses only its two series; self terms and the
    /// noise budget still come from the full fit.
    Bivariate,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "multivariate" => Ok(Mode::Multivariate),
            "bivariate" => Ok(Mode::Bivariate),
            other => Err(Error::InvalidArgument(format!("unknown mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisOptions {
    pub k: usize,
    pub alpha: f64,
    pub normalize: bool,
    pub mode: Mode,
    /// Worker threads; 0 lets the pool pick.
    pub workers: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        AnalysisOptions {
            k: crate::estimator::DEFAULT_LAG,
            alpha: 0.05,
            normalize: true,
            mode: Mode::Multivariate,
            workers: 0,
        }
    }
}

/// All flows of a set. Row `i` holds flows into `X_i`; the diagonal holds
/// self contributions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowMatrix {
    pub orientation: String,
    pub names: Vec<String>,
    pub dt: f64,
    pub k: usize,
    pub alpha: f64,
    pub mode: Mode,
    #[serde(rename = "T")]
    pub t: Vec<Vec<f64>>,
    #[serde(rename = "P")]
    pub p: Vec<Vec<f64>>,
    #[serde(rename = "TAU")]
    pub tau: Option<Vec<Vec<f64>>>,
    #[serde(rename = "SE")]
    pub se: Vec<Vec<f64>>,
    /// Normalized noise share of each target's budget.
    pub noise_share: Option<Vec<f64>>,
    /// Noise term `g_hat / (2 C_ii)` of each target.
    pub noise: Vec<f64>,
}

impl FlowMatrix {
    pub fn dim(&self) -> usize {
        self.names.len()
    }

    /// Sum of absolute normalized shares of row `i`, including noise.
    pub fn budget_abs_sum(&self, i: usize) -> Option<f64> {
        let tau = self.tau.as_ref()?;
        let noise = self.noise_share.as_ref()?;
        Some(tau[i].iter().map(|v| v.abs()).sum::<f64>() + noise[i].abs())
    }
}

struct Row {
    t: Vec<f64>,
    p: Vec<f64>,
    se: Vec<f64>,
    tau: Option<Vec<f64>>,
    noise_share: Option<f64>,
    noise: f64,
}

fn analyze_target(set: &TimeSeriesSet, moments: &SampleMoments, target: usize, opts: &AnalysisOptions) -> Result<Row> {
    let name = &set.names()[target];
    let d = set.dim();
    let step = opts.k as f64 * set.dt();
    let fit = fit_from_covariances(moments.for_target(target), step).map_err(|e| e.with_target(name))?;

    let mut flows: Vec<FlowEstimate> = Vec::with_capacity(d.saturating_sub(1));
    for source in (0..d).filter(|&j| j != target) {
        let f = match opts.mode {
            Mode::Multivariate => flow_from_fit(&fit, source)?,
            Mode::Bivariate => {
                let mut f = flow_bivariate(set.series(target), set.series(source), set.dt(), opts.k)
                    .map_err(|e| e.with_target(name))?;
                f.source = Some(source);
                f.target = target;
                f
            }
        };
        flows.push(f);
    }
    let me = self_from_fit(&fit);
    let noise = fit.g_hat / (2.0 * fit.target_variance());

    let mut t = vec![0.0; d];
    let mut p = vec![0.0; d];
    let mut se = vec![0.0; d];
    for f in flows.iter().chain(std::iter::once(&me)) {
        let j = f.source.unwrap_or(target);
        t[j] = f.value;
        p[j] = f.p_value;
        se[j] = f.std_err;
    }

    let (tau, noise_share) = if opts.normalize {
        let budget = normalize_flows(&flows, &me, &fit).map_err(|e| e.with_target(name))?;
        let mut tau = vec![0.0; d];
        for &(j, v) in &budget.flows {
            tau[j] = v;
        }
        tau[target] = budget.self_share;
        (Some(tau), Some(budget.noise_share))
    } else {
        (None, None)
    };
    Ok(Row {
        t,
        p,
        se,
        tau,
        noise_share,
        noise,
    })
}

/// Computes every flow, self contribution and significance level of `set`.
///
/// One regression per target serves all of its incoming flows. Targets are
/// processed on a pool of `opts.workers` threads; each target is computed
/// sequentially and rows are assembled in index order, so the result is
/// identical for any worker count.
pub fn all_pairs(set: &TimeSeriesSet, opts: &AnalysisOptions) -> Result<FlowMatrix> {
    if !(opts.alpha > 0.0 && opts.alpha < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "alpha must lie in (0, 1), got {}",
            opts.alpha
        )));
    }
    let moments = SampleMoments::compute(set, opts.k)?;
    let d = set.dim();
    let run = |i: usize| analyze_target(set, &moments, i, opts);

    let rows: Vec<Row> = if opts.workers == 1 {
        (0..d).map(run).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.workers)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        pool.install(|| (0..d).into_par_iter().map(run).collect::<Result<_>>())?
    };

    let normalized = opts.normalize;
    let mut fm = FlowMatrix {
        orientation: ORIENTATION.to_string(),
        names: set.names().to_vec(),
        dt: set.dt(),
        k: opts.k,
        alpha: opts.alpha,
        mode: opts.mode,
        t: Vec::with_capacity(d),
        p: Vec::with_capacity(d),
        tau: normalized.then(|| Vec::with_capacity(d)),
        se: Vec::with_capacity(d),
        noise_share: normalized.then(|| Vec::with_capacity(d)),
        noise: Vec::with_capacity(d),
    };
    for row in rows {
        fm.t.push(row.t);
        fm.p.push(row.p);
        fm.se.push(row.se);
        fm.noise.push(row.noise);
        if let (Some(tau), Some(r)) = (fm.tau.as_mut(), row.tau) {
            tau.push(r);
        }
        if let (Some(ns), Some(r)) = (fm.noise_share.as_mut(), row.noise_share) {
            ns.push(r);
        }
    }
    Ok(fm)
}

/// Per-test level after an optional Bonferroni correction over all
/// `d * d` tests (flows and self contributions).
pub fn effective_alpha(alpha: f64, d: usize, bonferroni: bool) -> f64 {
    if bonferroni {
        alpha / (d * d) as f64
    } else {
        alpha
    }
}
