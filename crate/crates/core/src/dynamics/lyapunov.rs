use nalgebra::{DMatrix, DVector};

use super::LinearSDE;
use crate::error::{Error, Result};

/// Relative bound on `max|A S + S A^T + Q| / max|Q|` for an accepted solve.
pub const RESIDUAL_TOLERANCE: f64 = 1e-12;

/// Stationary covariance `S` of a Hurwitz linear SDE, the solution of
/// `A S + S A^T + B B^T = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryCovariance {
    pub sigma: DMatrix<f64>,
    /// `max|A S + S A^T + Q|` of the returned (symmetrized) solution.
    pub residual: f64,
}

fn lyapunov_residual(a: &DMatrix<f64>, s: &DMatrix<f64>, q: &DMatrix<f64>) -> DMatrix<f64> {
    a * s + s * a.transpose() + q
}

/// Solves the Lyapunov equation through its Kronecker form
/// `(I (x) A + A (x) I) vec S = -vec Q`, followed by one step of iterative
/// refinement.
pub fn stationary_covariance(sde: &LinearSDE) -> Result<StationaryCovariance> {
    sde.require_hurwitz()?;
    let a = sde.drift();
    let q = sde.q();
    let d = sde.dim();
    let n = d * d;

    // column-major vec: entry (r, c) of S sits at c * d + r
    let mut k = DMatrix::zeros(n, n);
    for c in 0..d {
        for r in 0..d {
            let row = c * d + r;
            for m in 0..d {
                // (A S)_{rc} = sum_m A_rm S_mc
                k[(row, c * d + m)] += a[(r, m)];
                // (S A^T)_{rc} = sum_m S_rm A_cm
                k[(row, m * d + r)] += a[(c, m)];
            }
        }
    }
    let lu = k.lu();
    let rhs = DVector::from_fn(n, |p, _| -q[(p % d, p / d)]);
    let mut v = lu.solve(&rhs).ok_or(Error::NotHurwitz { max_real: sde.spectral_abscissa() })?;

    let unvec = |v: &DVector<f64>| DMatrix::from_fn(d, d, |r, c| v[c * d + r]);
    let r = lyapunov_residual(a, &unvec(&v), &q);
    let correction_rhs = DVector::from_fn(n, |p, _| -r[(p % d, p / d)]);
    if let Some(dv) = lu.solve(&correction_rhs) {
        v += dv;
    }

    let raw = unvec(&v);
    let sigma = (&raw + raw.transpose()) * 0.5;
    let residual = lyapunov_residual(a, &sigma, &q).amax();
    let bound = RESIDUAL_TOLERANCE * q.amax();
    if residual > bound && residual > 0.0 {
        return Err(Error::IllConditioned { residual, bound });
    }
    Ok(StationaryCovariance { sigma, residual })
}
