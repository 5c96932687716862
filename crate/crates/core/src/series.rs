//! Validated input containers: aligned time series and panel snapshot pairs.

use std::collections::HashSet;

use crate::error::{Error, Result};

/// How missing (non-finite) values are treated during validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NanPolicy {
    /// Any NaN or infinity is an error.
    #[default]
    Reject,
    /// Leading and trailing gaps are trimmed across all variables, interior
    /// gaps are filled by linear interpolation.
    Interpolate,
}

impl std::str::FromStr for NanPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reject" => Ok(NanPolicy::Reject),
            "interpolate" => Ok(NanPolicy::Interpolate),
            other => Err(Error::InvalidArgument(format!("unknown nan policy '{other}'"))),
        }
    }
}

/// `d` uniformly sampled, aligned series sharing a time step `dt`.
///
/// Row `i` of `values` is variable `i`; columns are time indices. A set that
/// exists has passed validation: every entry is finite, no row is constant,
/// names are unique and there are at least `d + 3` samples.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeriesSet {
    names: Vec<String>,
    values: Vec<Vec<f64>>,
    dt: f64,
}

impl TimeSeriesSet {
    /// Validates `raw` (one row per variable) with the default reject policy.
    pub fn new(names: Vec<String>, raw: Vec<Vec<f64>>, dt: f64) -> Result<Self> {
        validate_series_set(raw, names, dt, NanPolicy::Reject)
    }

    /// Builds a set with generated names `x1..xd`.
    pub fn from_rows(raw: Vec<Vec<f64>>, dt: f64) -> Result<Self> {
        let names = default_names(raw.len());
        Self::new(names, raw, dt)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn series(&self, i: usize) -> &[f64] {
        &self.values[i]
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Number of variables.
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Number of time samples.
    pub fn len(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index < self.dim() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index,
                len: self.dim(),
            })
        }
    }

    /// Returns a new set containing the listed variables in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        for &i in indices {
            self.check_index(i)?;
        }
        let names = indices.iter().map(|&i| self.names[i].clone()).collect();
        let values = indices.iter().map(|&i| self.values[i].clone()).collect();
        Self::new(names, values, self.dt)
    }
}

pub(crate) fn default_names(d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("x{i}")).collect()
}

/// Checks shape, finiteness, variability and length of raw input and returns
/// a validated [`TimeSeriesSet`].
pub fn validate_series_set(
    raw: Vec<Vec<f64>>,
    names: Vec<String>,
    dt: f64,
    nan_policy: NanPolicy,
) -> Result<TimeSeriesSet> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    let d = raw.len();
    if d == 0 {
        return Err(Error::InvalidArgument("no series given".into()));
    }
    if names.len() != d {
        return Err(Error::InvalidArgument(format!(
            "{} names for {} series",
            names.len(),
            d
        )));
    }
    let expected = raw[0].len();
    for (row, r) in raw.iter().enumerate() {
        if r.len() != expected {
            return Err(Error::NonRectangular {
                row,
                len: r.len(),
                expected,
            });
        }
    }
    let mut seen = HashSet::new();
    for n in &names {
        if !seen.insert(n.as_str()) {
            return Err(Error::DuplicateNames(n.clone()));
        }
    }

    let values = match nan_policy {
        NanPolicy::Reject => {
            for (row, name) in raw.iter().zip(&names) {
                if let Some(index) = row.iter().position(|v| !v.is_finite()) {
                    return Err(Error::NaNsPresent {
                        name: name.clone(),
                        index,
                    });
                }
            }
            raw
        }
        NanPolicy::Interpolate => interpolate_gaps(raw, &names)?,
    };

    let n = values[0].len();
    if n < d + 3 {
        return Err(Error::TooShort {
            len: n,
            vars: d,
            needed: d + 3,
        });
    }
    for (row, name) in values.iter().zip(&names) {
        let first = row[0];
        if row.iter().all(|&v| v == first) {
            return Err(Error::ConstantSeries { name: name.clone() });
        }
    }

    Ok(TimeSeriesSet { names, values, dt })
}

fn interpolate_gaps(raw: Vec<Vec<f64>>, names: &[String]) -> Result<Vec<Vec<f64>>> {
    let n = raw[0].len();
    let mut start = 0;
    let mut end = n;
    for (row, name) in raw.iter().zip(names) {
        let first = row.iter().position(|v| v.is_finite());
        let last = row.iter().rposition(|v| v.is_finite());
        match (first, last) {
            (Some(f), Some(l)) => {
                start = start.max(f);
                end = end.min(l + 1);
            }
            _ => {
                return Err(Error::NaNsPresent {
                    name: name.clone(),
                    index: 0,
                })
            }
        }
    }
    if start >= end {
        return Err(Error::TooShort {
            len: 0,
            vars: raw.len(),
            needed: raw.len() + 3,
        });
    }
    if start > 0 || end < n {
        log::warn!("trimmed {} leading and {} trailing samples with missing values", start, n - end);
    }

    let mut out = Vec::with_capacity(raw.len());
    for (row, name) in raw.into_iter().zip(names) {
        let mut row = row[start..end].to_vec();
        let mut filled = 0usize;
        let mut i = 0;
        while i < row.len() {
            if row[i].is_finite() {
                i += 1;
                continue;
            }
            // row[0] and the last entry are finite after trimming
            let left = i - 1;
            let mut right = i;
            while !row[right].is_finite() {
                right += 1;
            }
            let (y0, y1) = (row[left], row[right]);
            let span = (right - left) as f64;
            for (m, v) in row.iter_mut().enumerate().take(right).skip(i) {
                let w = (m - left) as f64 / span;
                *v = y0 + w * (y1 - y0);
            }
            filled += right - i;
            i = right;
        }
        if filled > 0 {
            log::warn!("interpolated {filled} missing values in series '{name}'");
        }
        out.push(row);
    }
    Ok(out)
}

/// Independent (state, next state) snapshot pairs separated by `dt_gap`.
///
/// Column `m` of `x0` and column `m` of `x1` belong to the same replicate.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelPairs {
    names: Vec<String>,
    x0: Vec<Vec<f64>>,
    x1: Vec<Vec<f64>>,
    dt_gap: f64,
}

impl PanelPairs {
    pub fn new(names: Vec<String>, x0: Vec<Vec<f64>>, x1: Vec<Vec<f64>>, dt_gap: f64) -> Result<Self> {
        if !(dt_gap > 0.0 && dt_gap.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "dt_gap must be positive, got {dt_gap}"
            )));
        }
        let d = x0.len();
        if d == 0 || x1.len() != d || names.len() != d {
            return Err(Error::InvalidArgument(
                "x0, x1 and names must have the same number of variables".into(),
            ));
        }
        let m = x0[0].len();
        for (row, r) in x0.iter().chain(x1.iter()).enumerate() {
            if r.len() != m {
                return Err(Error::NonRectangular {
                    row: row % d,
                    len: r.len(),
                    expected: m,
                });
            }
        }
        let mut seen = HashSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(Error::DuplicateNames(n.clone()));
            }
        }
        for (i, name) in names.iter().enumerate() {
            let bad = x0[i]
                .iter()
                .chain(x1[i].iter())
                .position(|v| !v.is_finite());
            if let Some(index) = bad {
                return Err(Error::NaNsPresent {
                    name: name.clone(),
                    index: index % m,
                });
            }
        }
        if m < d + 3 {
            return Err(Error::TooShort {
                len: m,
                vars: d,
                needed: d + 3,
            });
        }
        for (row, name) in x0.iter().zip(&names) {
            if row.iter().all(|&v| v == row[0]) {
                return Err(Error::ConstantSeries { name: name.clone() });
            }
        }
        Ok(PanelPairs {
            names,
            x0,
            x1,
            dt_gap,
        })
    }

    /// Slices a single series into consecutive `(X_n, X_{n+1})` pairs.
    pub fn from_series(set: &TimeSeriesSet) -> Result<Self> {
        let n = set.len();
        let x0 = set.values().iter().map(|r| r[..n - 1].to_vec()).collect();
        let x1 = set.values().iter().map(|r| r[1..].to_vec()).collect();
        Self::new(set.names().to_vec(), x0, x1, set.dt())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn x0(&self) -> &[Vec<f64>] {
        &self.x0
    }

    pub fn x1(&self) -> &[Vec<f64>] {
        &self.x1
    }

    pub fn dt_gap(&self) -> f64 {
        self.dt_gap
    }

    pub fn dim(&self) -> usize {
        self.x0.len()
    }

    /// Number of replicate pairs.
    pub fn len(&self) -> usize {
        self.x0[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(n: usize, phase: f64) -> Vec<f64> {
        (0..n).map(|i| ((i as f64) * 0.37 + phase).sin()).collect()
    }

    #[test]
    fn finite_matrix_passes_through() {
        let raw = vec![ramp(100, 0.0), ramp(100, 1.0)];
        let set = TimeSeriesSet::from_rows(raw.clone(), 1.0).unwrap();
        assert_eq!(set.dim(), 2);
        assert_eq!(set.len(), 100);
        assert_eq!(set.values(), raw.as_slice());
    }

    #[test]
    fn nan_rejected() {
        let mut a = ramp(50, 0.0);
        a[7] = f64::NAN;
        let err = TimeSeriesSet::from_rows(vec![a, ramp(50, 1.0)], 1.0).unwrap_err();
        assert!(matches!(err, Error::NaNsPresent { index: 7, .. }));
    }

    #[test]
    fn constant_series_rejected() {
        let err = TimeSeriesSet::from_rows(vec![ramp(50, 0.0), vec![5.0; 50]], 1.0).unwrap_err();
        assert!(matches!(err, Error::ConstantSeries { ref name } if name == "x2"));
    }

    #[test]
    fn short_and_ragged_and_duplicate() {
        let err = TimeSeriesSet::from_rows(vec![ramp(4, 0.0), ramp(4, 1.0)], 1.0).unwrap_err();
        assert!(matches!(err, Error::TooShort { needed: 5, .. }));
        let err = TimeSeriesSet::from_rows(vec![ramp(10, 0.0), ramp(9, 1.0)], 1.0).unwrap_err();
        assert!(matches!(err, Error::NonRectangular { row: 1, .. }));
        let err = TimeSeriesSet::new(
            vec!["a".into(), "a".into()],
            vec![ramp(10, 0.0), ramp(10, 1.0)],
            1.0,
        )
        .unwrap_err();
        assert_eq!(err, Error::DuplicateNames("a".into()));
        let err = TimeSeriesSet::from_rows(vec![ramp(10, 0.0)], 0.0).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn interpolation_fills_and_trims() {
        let nan = f64::NAN;
        let a = vec![nan, 1.0, 2.0, nan, nan, 5.0, 3.0, 1.0, 0.0, 4.0];
        let b = vec![0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 2.0, 1.0, nan];
        let set = validate_series_set(
            vec![a, b],
            default_names(2),
            1.0,
            NanPolicy::Interpolate,
        )
        .unwrap();
        assert_eq!(set.len(), 8);
        assert_eq!(set.series(0), &[1.0, 2.0, 3.0, 4.0, 5.0, 3.0, 1.0, 0.0]);
        assert_eq!(set.series(1), &[1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 2.0, 1.0]);
    }

    #[test]
    fn panel_from_series_pairs_neighbours() {
        let set = TimeSeriesSet::from_rows(vec![ramp(20, 0.0), ramp(20, 2.0)], 0.5).unwrap();
        let panel = PanelPairs::from_series(&set).unwrap();
        assert_eq!(panel.len(), 19);
        assert_eq!(panel.x1()[1][3], set.series(1)[4]);
        assert_eq!(panel.dt_gap(), 0.5);
    }
}
