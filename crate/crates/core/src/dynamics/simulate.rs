use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::LinearSDE;
use crate::error::{Error, Result};
use crate::series::TimeSeriesSet;

/// Lower bound on the default burn-in, in steps.
pub const MIN_BURN_IN: usize = 1000;

/// Raw simulated samples. Unlike a [`TimeSeriesSet`] this may hold
/// constant rows (e.g. noiseless fixed points).
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub names: Vec<String>,
    /// One row per variable.
    pub values: Vec<Vec<f64>>,
    pub dt: f64,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_series_set(&self) -> Result<TimeSeriesSet> {
        TimeSeriesSet::new(self.names.clone(), self.values.clone(), self.dt)
    }

    pub fn into_series_set(self) -> Result<TimeSeriesSet> {
        TimeSeriesSet::new(self.names, self.values, self.dt)
    }
}

/// Euler–Maruyama integration
/// `x_{n+1} = x_n + (f + A x_n) dt + B sqrt(dt) xi_n`.
///
/// `xi_n` are standard normals drawn from a ChaCha8 stream seeded with
/// `seed`, so equal arguments give bit-identical output. The first
/// `burn_in` steps (default [`LinearSDE::default_burn_in`]) are discarded;
/// the returned trajectory starts at the post-burn-in state and holds
/// `n_steps` samples.
pub fn simulate(
    sde: &LinearSDE,
    x0: &[f64],
    n_steps: usize,
    dt: f64,
    seed: u64,
    burn_in: Option<usize>,
) -> Result<Trajectory> {
    let d = sde.dim();
    if x0.len() != d {
        return Err(Error::InvalidArgument(format!(
            "initial state has length {}, expected {d}",
            x0.len()
        )));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    if n_steps == 0 {
        return Err(Error::InvalidArgument("n_steps must be at least 1".into()));
    }
    let burn_in = burn_in.unwrap_or_else(|| sde.default_burn_in(dt));

    let m = sde.noise().ncols();
    // row-major copies keep the inner loops on contiguous memory
    let a: Vec<f64> = (0..d * d).map(|p| sde.drift()[(p / d, p % d)]).collect();
    let b: Vec<f64> = (0..d * m).map(|p| sde.noise()[(p / m, p % m)] * dt.sqrt()).collect();
    let f: Vec<f64> = sde.offset().iter().copied().collect();
    let noiseless = b.iter().all(|&v| v == 0.0);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = x0.to_vec();
    let mut next = vec![0.0; d];
    let mut xi = vec![0.0; m];
    let mut values = vec![Vec::with_capacity(n_steps); d];

    let total = burn_in + n_steps - 1;
    for step in 0..=total {
        if step >= burn_in {
            for (row, &v) in values.iter_mut().zip(&x) {
                row.push(v);
            }
        }
        if step == total {
            break;
        }
        if !noiseless {
            for v in xi.iter_mut() {
                *v = StandardNormal.sample(&mut rng);
            }
        }
        for i in 0..d {
            let ai = &a[i * d..(i + 1) * d];
            let mut drift = f[i];
            for j in 0..d {
                drift += ai[j] * x[j];
            }
            let mut v = x[i] + drift * dt;
            if !noiseless {
                let bi = &b[i * m..(i + 1) * m];
                for (bij, e) in bi.iter().zip(&xi) {
                    v += bij * e;
                }
            }
            next[i] = v;
        }
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteState { step: step + 1 });
        }
        std::mem::swap(&mut x, &mut next);
    }

    Ok(Trajectory {
        names: sde.names().to_vec(),
        values,
        dt,
    })
}
