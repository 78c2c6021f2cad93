//! Physical constants and the magnetic spin-resonator coupling helpers.

use crate::error::{Error, Result};

/// Constants entering the spin-resonator coupling λ = g_s μ_B G_m a₀ / ħ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Bohr magneton, J/T.
    pub mu_b: f64,
    /// Electron g-factor, dimensionless.
    pub g_s: f64,
}

impl PhysicalConstants {
    /// CODATA 2018 values, with g_s = 2 for the driven electronic spin.
    pub const SI: Self = Self {
        hbar: 1.054_571_817e-34,
        mu_b: 9.274_010_0783e-24,
        g_s: 2.0,
    };

    /// Ground-state position spread a₀ = √(ħ / 2mω) of a resonator mode.
    ///
    /// `mass` in kg, `omega` angular, rad/s; returns metres.
    pub fn zero_point_amplitude(&self, mass: f64, omega: f64) -> Result<f64> {
        if !(mass > 0.0) {
            return Err(Error::Domain(format!("mass must be positive, got {mass:e}")));
        }
        if !(omega > 0.0) {
            return Err(Error::Domain(format!("omega must be positive, got {omega:e}")));
        }
        Ok((self.hbar / (2.0 * mass * omega)).sqrt())
    }

    /// Spin-resonator coupling λ = g_s μ_B G_m a₀ / ħ for a magnetic tip with
    /// field gradient `grad` (T/m) and zero-point amplitude `a0` (m).
    ///
    /// Returns an angular frequency in rad/s.
    pub fn spin_resonator_coupling(&self, grad: f64, a0: f64) -> Result<f64> {
        if grad < 0.0 {
            return Err(Error::Domain(format!(
                "field gradient must be non-negative, got {grad:e}"
            )));
        }
        if !(a0 > 0.0) {
            return Err(Error::Domain(format!(
                "zero-point amplitude must be positive, got {a0:e}"
            )));
        }
        Ok(self.g_s * self.mu_b * grad * a0 / self.hbar)
    }
}
