use nalgebra::DVector;
use serde::Deserialize;

use super::{matrix_from_rows, LinearSDE};
use crate::error::{Error, Result};

const OU2: &str = include_str!("../../presets/ou2.toml");
const CHAIN5: &str = include_str!("../../presets/chain5.toml");

/// A linear SDE together with default simulation settings, as stored in
/// TOML preset files.
///
/// ```toml
/// names = ["x1", "x2"]
/// dt = 0.01
/// n = 1000000
/// burn_in = 10000          # optional, default from the spectrum
/// A = [[-1.0, 0.5], [0.0, -1.0]]
/// B = [[1.0, 0.0], [0.0, 1.0]]
/// f = [0.0, 0.0]           # optional
/// x0 = [0.0, 0.0]          # optional
/// ```
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SdeConfig {
    pub names: Option<Vec<String>>,
    pub dt: f64,
    pub n: usize,
    pub burn_in: Option<usize>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<f64>>,
    pub f: Option<Vec<f64>>,
    pub x0: Option<Vec<f64>>,
}

impl SdeConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::BadMatrixSpec(e.to_string()))
    }

    pub fn sde(&self) -> Result<LinearSDE> {
        let a = matrix_from_rows(&self.a)?;
        let b = matrix_from_rows(&self.b)?;
        let d = a.nrows();
        let f = DVector::from_vec(self.f.clone().unwrap_or_else(|| vec![0.0; d]));
        let names = self
            .names
            .clone()
            .unwrap_or_else(|| crate::series::default_names(d));
        LinearSDE::new(names, a, f, b)
    }

    pub fn initial_state(&self) -> Vec<f64> {
        self.x0.clone().unwrap_or_else(|| vec![0.0; self.a.len()])
    }
}

pub fn preset_names() -> &'static [&'static str] {
    &["ou2", "chain5"]
}

/// Built-in preset by name.
pub fn preset(name: &str) -> Result<SdeConfig> {
    let text = match name {
        "ou2" => OU2,
        "chain5" => CHAIN5,
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown preset '{other}' (available: {})",
                preset_names().join(", ")
            )))
        }
    };
    SdeConfig::from_toml(text)
}
