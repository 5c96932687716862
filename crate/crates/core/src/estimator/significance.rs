use statrs::function::erf::erfc;

use super::{FlowEstimate, FlowKind};
use super::fit::LinearModelFit;

/// Two-sided standard normal quantiles for 90, 95 and 99% intervals.
pub const Z90: f64 = 1.6448536269514722;
pub const Z95: f64 = 1.959963984540054;
pub const Z99: f64 = 2.5758293035489004;

/// Two-sided normal p-value `2 (1 - Phi(|z|))`, computed through `erfc` so
/// small tails keep their precision.
pub fn two_sided_p(z: f64) -> f64 {
    erfc(z.abs() / std::f64::consts::SQRT_2).clamp(0.0, 1.0)
}

/// Builds an estimate with standard error, intervals and p-value attached.
///
/// A zero standard error with a nonzero value yields `p = 0` and sets
/// `zero_variance`.
pub fn annotate(kind: FlowKind, source: Option<usize>, target: usize, value: f64, std_err: f64) -> FlowEstimate {
    let std_err = std_err.abs();
    let (p_value, zero_variance) = if std_err > 0.0 {
        (two_sided_p(value / std_err), false)
    } else if value == 0.0 {
        (1.0, false)
    } else {
        (0.0, true)
    };
    let ci = |z: f64| (value - z * std_err, value + z * std_err);
    FlowEstimate {
        kind,
        source,
        target,
        value,
        std_err,
        ci90: ci(Z90),
        ci95: ci(Z95),
        ci99: ci(Z99),
        p_value,
        normalized: None,
        zero_variance,
    }
}

/// Attaches the delta-method standard error implied by `fit`.
///
/// A pairwise flow is `a_j C_ij / C_ii`, linear in `a_j`, so its error is
/// `|C_ij / C_ii| se(a_j)`; a self contribution is `a_i` itself.
pub fn significance(flow: FlowEstimate, fit: &LinearModelFit) -> FlowEstimate {
    let target = fit.target;
    let std_err = match (flow.kind, flow.source) {
        (FlowKind::Pairwise, Some(j)) => {
            let c = &fit.covariances.c;
            (c[(target, j)] / c[(target, target)]).abs() * fit.coeff_se(j)
        }
        _ => fit.coeff_se(target),
    };
    let mut out = annotate(flow.kind, flow.source, flow.target, flow.value, std_err);
    out.normalized = flow.normalized;
    out
}
