//! Liang–Kleeman information flow between the components of multivariate
//! time series.
//!
//! The crate estimates `T_{j->i}`, the rate (nats per unit time) at which
//! `X_j` feeds the marginal entropy of `X_i`, from sample covariances under
//! a linear model with additive noise, together with self contributions,
//! significance tests and normalized shares. A linear SDE harness
//! ([`dynamics`]) simulates ground truth and evaluates the exact flows of
//! linear systems for validation.
//!
//! ```
//! use infoflow::dynamics::{preset, simulate};
//! use infoflow::estimator::flow_multivariate;
//!
//! let cfg = preset("ou2").unwrap();
//! let sde = cfg.sde().unwrap();
//! let set = simulate(&sde, &[0.0, 0.0], 20_000, 0.01, 7, None)
//!     .unwrap()
//!     .into_series_set()
//!     .unwrap();
//! let t21 = flow_multivariate(&set, 1, 0, 1).unwrap();
//! assert!(t21.value > 0.0);
//! ```

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod estimator;
pub mod graph;
pub mod linalg;
pub mod moments;
pub mod series;

pub use error::{Error, Result};
pub use estimator::{FlowEstimate, FlowKind, LinearModelFit};
pub use graph::{all_pairs, build_graph, AnalysisOptions, CausalGraph, FlowMatrix, Mode};
pub use series::{validate_series_set, NanPolicy, PanelPairs, TimeSeriesSet};
