//! Small dense linear-algebra helpers: cofactors and a scale-free SPD solver.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{Error, Result};

/// Pivots of the unit-diagonal (correlation-scaled) Cholesky factor below
/// `SINGULAR_FACTOR * d * EPSILON` are treated as exact collinearity.
pub const SINGULAR_FACTOR: f64 = 64.0;

pub(crate) fn singular_tolerance(d: usize) -> f64 {
    SINGULAR_FACTOR * d as f64 * f64::EPSILON
}

/// Signed cofactor `(-1)^(i+j) * det(minor(i, j))` of a square matrix.
///
/// A 1x1 matrix has cofactor 1. Up to 3x3 the minor determinant is expanded
/// directly, larger minors go through an LU factorization.
pub fn cofactor(c: &DMatrix<f64>, i: usize, j: usize) -> f64 {
    assert!(c.is_square(), "cofactor of a non-square matrix");
    let d = c.nrows();
    assert!(i < d && j < d, "cofactor index out of range");
    if d == 1 {
        return 1.0;
    }
    let minor = c.clone().remove_row(i).remove_column(j);
    let det = match d - 1 {
        1 => minor[(0, 0)],
        2 => minor[(0, 0)] * minor[(1, 1)] - minor[(0, 1)] * minor[(1, 0)],
        3 => {
            let m = |r: usize, s: usize| minor[(r, s)];
            m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
                - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
                + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
        }
        _ => minor.lu().determinant(),
    };
    if (i + j).is_multiple_of(2) {
        det
    } else {
        -det
    }
}

/// All cofactors, `out[(i, j)] = cofactor(c, i, j)`.
pub fn cofactor_matrix(c: &DMatrix<f64>) -> DMatrix<f64> {
    let d = c.nrows();
    DMatrix::from_fn(d, d, |i, j| cofactor(c, i, j))
}

/// Determinant via LU (exact expansion for d <= 3 is not needed here).
pub fn determinant(c: &DMatrix<f64>) -> f64 {
    c.clone().lu().determinant()
}

/// Cholesky factorization of a covariance matrix after rescaling it to unit
/// diagonal.
///
/// Solving through the correlation-scaled matrix makes every result
/// equivariant under per-variable rescaling up to rounding, and gives a
/// dimensionless collinearity test.
#[derive(Debug, Clone)]
pub struct ScaledCholesky {
    inv_sd: DVector<f64>,
    chol: Cholesky<f64, Dyn>,
}

impl ScaledCholesky {
    pub fn new(c: &DMatrix<f64>) -> Result<Self> {
        let d = c.nrows();
        let inv_sd = DVector::from_fn(d, |i, _| 1.0 / c[(i, i)].sqrt());
        if inv_sd.iter().any(|v| !v.is_finite() || *v <= 0.0) {
            return Err(Error::singular());
        }
        let r = DMatrix::from_fn(d, d, |i, j| {
            if i == j {
                1.0
            } else {
                c[(i, j)] * inv_sd[i] * inv_sd[j]
            }
        });
        let chol = Cholesky::new(r).ok_or_else(Error::singular)?;
        let tol = singular_tolerance(d);
        let l = chol.l_dirty();
        if (0..d).any(|i| l[(i, i)] * l[(i, i)] < tol) {
            return Err(Error::singular());
        }
        Ok(ScaledCholesky { inv_sd, chol })
    }

    /// Solves `C x = b`.
    pub fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        let scaled = b.component_mul(&self.inv_sd);
        self.chol.solve(&scaled).component_mul(&self.inv_sd)
    }

    /// `C^{-1}`.
    pub fn inverse(&self) -> DMatrix<f64> {
        let r_inv = self.chol.inverse();
        let d = self.inv_sd.len();
        DMatrix::from_fn(d, d, |i, j| r_inv[(i, j)] * self.inv_sd[i] * self.inv_sd[j])
    }
}
