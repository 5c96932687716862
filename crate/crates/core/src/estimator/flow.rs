use nalgebra::{DMatrix, DVector};

use super::fit::{fit_from_covariances, fit_linear_model, LinearModelFit};
use super::significance::{annotate, significance};
use super::{FlowEstimate, FlowKind};
use crate::error::{Error, Result};
use crate::linalg::{cofactor, determinant, singular_tolerance};
use crate::moments::{max_lag, SampleCovariances, SampleMoments};
use crate::series::{PanelPairs, TimeSeriesSet};

/// Difference lag used when none is given.
pub const DEFAULT_LAG: usize = 1;

/// Flow from `source` into the fit's target, `a_source * C_ts / C_tt`,
/// with significance attached.
pub fn flow_from_fit(fit: &LinearModelFit, source: usize) -> Result<FlowEstimate> {
    let target = fit.target;
    if source == target {
        return Err(Error::SameIndex(source));
    }
    if source >= fit.dim() {
        return Err(Error::IndexOutOfRange {
            index: source,
            len: fit.dim(),
        });
    }
    let c = &fit.covariances.c;
    let c_ts = c[(target, source)];
    // exact zero when the sample covariance vanishes
    let value = if c_ts == 0.0 {
        0.0
    } else {
        fit.coeffs[source] * c_ts / c[(target, target)]
    };
    let raw = annotate(FlowKind::Pairwise, Some(source), target, value, 0.0);
    Ok(significance(raw, fit))
}

/// Self contribution `dH*_target/dt`, the target's own coefficient.
pub fn self_from_fit(fit: &LinearModelFit) -> FlowEstimate {
    let target = fit.target;
    let raw = annotate(FlowKind::SelfContribution, None, target, fit.coeffs[target], 0.0);
    significance(raw, fit)
}

/// Information flow `T_{source -> target}` conditioned on every component
/// of `set`.
pub fn flow_multivariate(set: &TimeSeriesSet, source: usize, target: usize, k: usize) -> Result<FlowEstimate> {
    if source == target {
        return Err(Error::SameIndex(source));
    }
    set.check_index(source)?;
    let fit = fit_linear_model(set, target, k)?;
    flow_from_fit(&fit, source)
}

/// Self contribution of `target` given all components of `set`.
pub fn self_contribution(set: &TimeSeriesSet, target: usize, k: usize) -> Result<FlowEstimate> {
    let fit = fit_linear_model(set, target, k)?;
    Ok(self_from_fit(&fit))
}

/// Flow from `source` to `target` estimated from panel snapshot pairs.
pub fn flow_panel(pairs: &PanelPairs, source: usize, target: usize) -> Result<FlowEstimate> {
    let d = pairs.dim();
    for index in [source, target] {
        if index >= d {
            return Err(Error::IndexOutOfRange { index, len: d });
        }
    }
    if source == target {
        return Err(Error::SameIndex(source));
    }
    let moments = SampleMoments::from_panel(pairs);
    let fit = fit_from_covariances(moments.for_target(target), pairs.dt_gap())?;
    flow_from_fit(&fit, source)
}

fn relabel(cov: &SampleCovariances, source: Option<usize>) -> (DMatrix<f64>, DVector<f64>) {
    let d = cov.c.nrows();
    let mut order = vec![cov.target];
    if let Some(s) = source {
        order.push(s);
    }
    order.extend((0..d).filter(|&m| m != cov.target && Some(m) != source));
    let c = DMatrix::from_fn(d, d, |r, s| cov.c[(order[r], order[s])]);
    let cd = DVector::from_fn(d, |r, _| cov.cd[order[r]]);
    (c, cd)
}

/// Cofactor form of the flow: after relabeling so that the target is
/// variable 1 and the source variable 2,
/// `T_{2->1} = (1/det C) sum_j Delta_2j C_{j,d1} * C_12 / C_11`.
pub fn cofactor_flow(cov: &SampleCovariances, source: usize) -> Result<f64> {
    if source == cov.target {
        return Err(Error::SameIndex(source));
    }
    let (c, cd) = relabel(cov, Some(source));
    let det = determinant(&c);
    if det == 0.0 || !det.is_finite() {
        return Err(Error::singular());
    }
    let d = c.nrows();
    let sum: f64 = (0..d).map(|j| cofactor(&c, 1, j) * cd[j]).sum();
    Ok(sum / det * c[(0, 1)] / c[(0, 0)])
}

/// Cofactor form of the self contribution,
/// `dH*_1/dt = (1/det C) sum_j Delta_1j C_{j,d1}`.
pub fn cofactor_self_contribution(cov: &SampleCovariances) -> Result<f64> {
    let (c, cd) = relabel(cov, None);
    let det = determinant(&c);
    if det == 0.0 || !det.is_finite() {
        return Err(Error::singular());
    }
    let d = c.nrows();
    let sum: f64 = (0..d).map(|j| cofactor(&c, 0, j) * cd[j]).sum();
    Ok(sum / det)
}

/// Two-variable closed form
/// `(C11 C12 C2d1 - C12^2 C1d1) / (C11^2 C22 - C11 C12^2)`.
pub fn bivariate_closed_form(c11: f64, c12: f64, c22: f64, c1d1: f64, c2d1: f64) -> Result<f64> {
    if !(c11 > 0.0 && c22 > 0.0) {
        return Err(Error::singular());
    }
    let rel_det = 1.0 - c12 * c12 / (c11 * c22);
    if rel_det < singular_tolerance(2) {
        return Err(Error::singular());
    }
    Ok((c11 * c12 * c2d1 - c12 * c12 * c1d1) / (c11 * c11 * c22 - c11 * c12 * c12))
}

/// Flow `T_{2->1}` from `x2` into `x1` computed entirely in closed form
/// from the five bivariate covariances.
///
/// Shares no code with the general estimator beyond the significance
/// annotation, so the two can be checked against each other.
pub fn flow_bivariate(x1: &[f64], x2: &[f64], dt: f64, k: usize) -> Result<FlowEstimate> {
    let n = x1.len();
    if x2.len() != n {
        return Err(Error::NonRectangular {
            row: 1,
            len: x2.len(),
            expected: n,
        });
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    if n < 5 {
        return Err(Error::TooShort {
            len: n,
            vars: 2,
            needed: 5,
        });
    }
    let max = max_lag(n, 2);
    if k == 0 || k > max {
        return Err(Error::KTooLarge { k, max });
    }
    for (name, x) in [("x1", x1), ("x2", x2)] {
        if let Some(index) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::NaNsPresent {
                name: name.into(),
                index,
            });
        }
    }

    let m = n - k;
    let scale = 1.0 / (k as f64 * dt);
    let dx1: Vec<f64> = (0..m).map(|t| (x1[t + k] - x1[t]) * scale).collect();
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (m1, m2, md) = (mean(&x1[..m]), mean(&x2[..m]), mean(&dx1));
    let mut s = [0.0f64; 6];
    for t in 0..m {
        let (u, v, w) = (x1[t] - m1, x2[t] - m2, dx1[t] - md);
        s[0] += u * u;
        s[1] += u * v;
        s[2] += v * v;
        s[3] += u * w;
        s[4] += v * w;
        s[5] += w * w;
    }
    let div = (m - 1) as f64;
    let [c11, c12, c22, c1d1, c2d1, cdd] = s.map(|v| v / div);

    let value = bivariate_closed_form(c11, c12, c22, c1d1, c2d1)?;

    let det = c11 * c22 - c12 * c12;
    let a1 = (c22 * c1d1 - c12 * c2d1) / det;
    let a2 = (c11 * c2d1 - c12 * c1d1) / det;
    let rss = (div * (cdd - a1 * c1d1 - a2 * c2d1)).max(0.0);
    let resid_var = rss / (m - 3) as f64;
    let var_a2 = resid_var * c11 / (div * det);
    let std_err = (c12 / c11).abs() * var_a2.max(0.0).sqrt();
    Ok(annotate(FlowKind::Pairwise, Some(1), 0, value, std_err))
}
