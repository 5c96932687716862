//! Linear stochastic systems `dX = (f + A X) dt + B dW`: simulation and
//! exact stationary oracles.

mod lyapunov;
mod oracle;
mod presets;
mod simulate;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

pub use lyapunov::{stationary_covariance, StationaryCovariance};
pub use oracle::{theoretical_budget, theoretical_flow, theoretical_matrix, TheoreticalBudget, TheoreticalMatrix};
pub use presets::{preset, preset_names, SdeConfig};
pub use simulate::{simulate, Trajectory, MIN_BURN_IN};

/// Linear SDE with constant additive noise.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSDE {
    names: Vec<String>,
    a: DMatrix<f64>,
    f: DVector<f64>,
    b: DMatrix<f64>,
}

impl LinearSDE {
    /// `a` is d x d, `f` has length d, `b` is d x m for any m >= 1.
    pub fn new(names: Vec<String>, a: DMatrix<f64>, f: DVector<f64>, b: DMatrix<f64>) -> Result<Self> {
        let d = a.nrows();
        if d == 0 || !a.is_square() {
            return Err(Error::BadMatrixSpec(format!(
                "drift matrix must be square and non-empty, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        if f.len() != d {
            return Err(Error::BadMatrixSpec(format!("offset has length {}, expected {d}", f.len())));
        }
        if b.nrows() != d || b.ncols() == 0 {
            return Err(Error::BadMatrixSpec(format!(
                "noise matrix must have {d} rows, got {}x{}",
                b.nrows(),
                b.ncols()
            )));
        }
        if names.len() != d {
            return Err(Error::BadMatrixSpec(format!("{} names for {d} variables", names.len())));
        }
        if a.iter().chain(f.iter()).chain(b.iter()).any(|v| !v.is_finite()) {
            return Err(Error::BadMatrixSpec("non-finite coefficient".into()));
        }
        Ok(LinearSDE { names, a, f, b })
    }

    /// Zero offset and generated names.
    pub fn with_drift_and_noise(a: DMatrix<f64>, b: DMatrix<f64>) -> Result<Self> {
        let d = a.nrows();
        Self::new(crate::series::default_names(d), a, DVector::zeros(d), b)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn drift(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn offset(&self) -> &DVector<f64> {
        &self.f
    }

    pub fn noise(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }

    /// Noise covariance `Q = B B^T`; its diagonal holds `g_ii`.
    pub fn q(&self) -> DMatrix<f64> {
        &self.b * self.b.transpose()
    }

    /// Largest real part among the eigenvalues of `A`.
    pub fn spectral_abscissa(&self) -> f64 {
        self.a
            .complex_eigenvalues()
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_hurwitz(&self) -> bool {
        self.spectral_abscissa() < 0.0
    }

    pub(crate) fn require_hurwitz(&self) -> Result<()> {
        let max_real = self.spectral_abscissa();
        if max_real < 0.0 {
            Ok(())
        } else {
            Err(Error::NotHurwitz { max_real })
        }
    }

    /// Burn-in length reaching stationarity: ten slowest relaxation times,
    /// at least [`MIN_BURN_IN`] steps.
    pub fn default_burn_in(&self, dt: f64) -> usize {
        let abscissa = self.spectral_abscissa();
        if abscissa < 0.0 {
            let steps = (10.0 / (abscissa.abs() * dt)).ceil();
            if steps.is_finite() && steps < 1e12 {
                return (steps as usize).max(MIN_BURN_IN);
            }
        }
        MIN_BURN_IN
    }
}

/// Parses a matrix written as rows separated by `;` and entries separated by
/// `,` or whitespace, e.g. `"-1, 0.5; 0, -1"`.
pub fn parse_matrix(spec: &str) -> Result<DMatrix<f64>> {
    let rows: Vec<Vec<f64>> = spec
        .split(';')
        .map(|row| {
            row.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|_| Error::BadMatrixSpec(format!("cannot parse '{s}' in '{spec}'")))
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    matrix_from_rows(&rows)
}

pub(crate) fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || ncols == 0 {
        return Err(Error::BadMatrixSpec("empty matrix".into()));
    }
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::BadMatrixSpec("rows have different lengths".into()));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}
