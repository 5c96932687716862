//! Information-flow estimators.
//!
//! For a target `X_i` the difference series `(X_{i,n+k} - X_{i,n}) / (k dt)`
//! is regressed on all components. With `a_j` the fitted coefficient of
//! `X_j` and `C` the sample covariance matrix,
//!
//! * the flow from `X_j` to `X_i` is `T_{j->i} = a_j C_ij / C_ii`,
//! * the self contribution of `X_i` is `dH*_i/dt = a_i`.
//!
//! Both are the cofactor expressions `sum_m Delta_jm C_{m,di} / det C`
//! rewritten through the normal equations; [`cofactor_flow`] and
//! [`cofactor_self_contribution`] keep the cofactor route for
//! cross-checking. Values are in nats per unit time.

mod fit;
mod flow;
mod normalize;
mod significance;

pub use fit::{fit_from_covariances, fit_linear_model, LinearModelFit};
pub use flow::{
    bivariate_closed_form, cofactor_flow, cofactor_self_contribution, flow_bivariate, flow_from_fit,
    flow_multivariate, flow_panel, self_contribution, self_from_fit, DEFAULT_LAG,
};
pub use normalize::{normalize_flows, NormalizedBudget};
pub use significance::{annotate, significance, two_sided_p, Z90, Z95, Z99};

/// Which causal quantity an estimate refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowKind {
    Pairwise,
    SelfContribution,
}

/// A single estimated flow or self contribution with its uncertainty.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FlowEstimate {
    pub kind: FlowKind,
    /// Unset for self contributions.
    pub source: Option<usize>,
    pub target: usize,
    pub value: f64,
    pub std_err: f64,
    pub ci90: (f64, f64),
    pub ci95: (f64, f64),
    pub ci99: (f64, f64),
    pub p_value: f64,
    /// Share of the target's entropy budget, when normalized.
    pub normalized: Option<f64>,
    /// Set when the standard error vanished while the value did not.
    pub zero_variance: bool,
}

impl FlowEstimate {
    pub fn is_significant(&self, alpha: f64) -> bool {
        self.p_value < alpha
    }
}
