use super::fit::LinearModelFit;
use super::{FlowEstimate, FlowKind};
use crate::error::{Error, Result};

/// Relative shares of one target's entropy budget.
///
/// `Z = sum_j |T_{j->i}| + |dH*_i/dt| + |g / (2 C_ii)|` and every share is
/// the signed term divided by `Z`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedBudget {
    pub target: usize,
    /// `(source, tau)` in the order the flows were given.
    pub flows: Vec<(usize, f64)>,
    pub self_share: f64,
    pub noise_share: f64,
    /// Noise contribution `g_hat / (2 C_ii)`.
    pub noise_term: f64,
    pub total: f64,
}

impl NormalizedBudget {
    /// Sum of absolute shares; one up to rounding.
    pub fn abs_sum(&self) -> f64 {
        self.flows.iter().map(|(_, t)| t.abs()).sum::<f64>() + self.self_share.abs() + self.noise_share.abs()
    }

    pub fn tau(&self, source: usize) -> Option<f64> {
        self.flows.iter().find(|(s, _)| *s == source).map(|(_, t)| *t)
    }
}

/// Normalizes all flows into a target together with its self contribution
/// and noise term.
pub fn normalize_flows(flows: &[FlowEstimate], self_term: &FlowEstimate, fit: &LinearModelFit) -> Result<NormalizedBudget> {
    let target = fit.target;
    let mismatch = flows
        .iter()
        .any(|f| f.target != target || f.kind != FlowKind::Pairwise)
        || self_term.target != target
        || self_term.kind != FlowKind::SelfContribution;
    if mismatch {
        return Err(Error::InvalidArgument(
            "flows, self contribution and fit must share the same target".into(),
        ));
    }
    let noise_term = fit.g_hat / (2.0 * fit.target_variance());
    let total = flows.iter().map(|f| f.value.abs()).sum::<f64>() + self_term.value.abs() + noise_term.abs();
    if !total.is_finite() || total <= f64::MIN_POSITIVE {
        return Err(Error::DegenerateBudget {
            target: target.to_string(),
        });
    }
    Ok(NormalizedBudget {
        target,
        flows: flows
            .iter()
            .map(|f| (f.source.unwrap_or(target), f.value / total))
            .collect(),
        self_share: self_term.value / total,
        noise_share: noise_term / total,
        noise_term,
        total,
    })
}
