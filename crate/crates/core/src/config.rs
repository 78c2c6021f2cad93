//! Run configuration: JSON on disk (frequencies in Hz), angular units inside.

use std::f64::consts::TAU;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::chain::ResonatorSpec;
use crate::error::{Error, Result};
use crate::spin::MAX_SPINS;

/// One simulation run as stored on disk. All frequencies are cyclic (Hz)
/// here and converted to angular units at the [`RunConfig::spec`] boundary.
/// The seed is mandatory so no run ever depends on the wall clock.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n: usize,
    pub omega_r_hz: f64,
    pub g_hz: f64,
    pub lambda_hz: f64,
    pub delta_max: f64,
    pub seed: u64,
    pub t_g_seconds: f64,
    pub trials: usize,
}

impl Default for RunConfig {
    /// The reference chain: 11 resonators at 1 MHz, 500 kHz wires, 50 kHz
    /// spin coupling, 0.3 ms gate time, 200-trial ensembles.
    fn default() -> Self {
        Self {
            n: 11,
            omega_r_hz: 1e6,
            g_hz: 5e5,
            lambda_hz: 5e4,
            delta_max: 0.01,
            seed: 42,
            t_g_seconds: 3e-4,
            trials: 200,
        }
    }
}

impl RunConfig {
    /// Parses and validates a JSON document. Unknown keys are rejected with
    /// the list of accepted ones; missing keys are named.
    pub fn from_json_slice(data: &[u8]) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_slice(data).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::Config("n must be at least 1".into()));
        }
        if self.n > MAX_SPINS {
            return Err(Error::Config(format!(
                "n = {} exceeds the {MAX_SPINS}-spin statevector cap",
                self.n
            )));
        }
        if !(self.omega_r_hz > 0.0) || !self.omega_r_hz.is_finite() {
            return Err(Error::Config(format!(
                "omega_r_hz must be positive and finite, got {}",
                self.omega_r_hz
            )));
        }
        if !(self.g_hz >= 0.0) || !self.g_hz.is_finite() {
            return Err(Error::Config(format!(
                "g_hz must be non-negative and finite, got {}",
                self.g_hz
            )));
        }
        if !(self.lambda_hz >= 0.0) || !self.lambda_hz.is_finite() {
            return Err(Error::Config(format!(
                "lambda_hz must be non-negative and finite, got {}",
                self.lambda_hz
            )));
        }
        if !(0.0..1.0).contains(&self.delta_max) {
            return Err(Error::Config(format!(
                "delta_max must lie in [0, 1), got {}",
                self.delta_max
            )));
        }
        if !(self.t_g_seconds > 0.0) || !self.t_g_seconds.is_finite() {
            return Err(Error::Config(format!(
                "t_g_seconds must be positive and finite, got {}",
                self.t_g_seconds
            )));
        }
        if self.trials < 1 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        Ok(())
    }

    /// Hz → rad/s conversion into the validated chain parameters.
    pub fn spec(&self) -> Result<ResonatorSpec> {
        ResonatorSpec::new(
            self.n,
            TAU * self.omega_r_hz,
            TAU * self.g_hz,
            TAU * self.lambda_hz,
            self.delta_max,
        )
    }
}

/// Reads and validates a config file.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let data = std::fs::read(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    RunConfig::from_json_slice(&data)
}
