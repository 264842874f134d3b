use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{OscError, Result};

/// Parameters of a bank of identical damped oscillators.
///
/// All channels share one frequency and damping constant; that is what makes
/// superposition of states meaningful. `dt` is the sampling/validation step
/// (the exact propagator itself has no step error), and `t_end` is the
/// default trajectory horizon.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OscillatorParams {
    /// Decay rate `b` of the state envelope; strictly negative.
    pub damping: f64,
    /// Angular frequency in rad/s; strictly positive.
    pub omega: f64,
    /// Sample step; must resolve a period at least twentyfold.
    pub dt: f64,
    /// Default trajectory horizon; at least one period.
    pub t_end: f64,
}

impl OscillatorParams {
    pub fn new(damping: f64, omega: f64, dt: f64, t_end: f64) -> Result<Self> {
        let p = OscillatorParams {
            damping,
            omega,
            dt,
            t_end,
        };
        p.validate()?;
        Ok(p)
    }

    /// One oscillation period, `2*pi / omega`.
    pub fn period(&self) -> f64 {
        TAU / self.omega
    }

    /// The complex rate `b + i*omega` of the homogeneous dynamics.
    pub fn lambda(&self) -> Complex64 {
        Complex64::new(self.damping, self.omega)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.damping.is_finite() || self.damping >= 0.0 {
            return Err(OscError::InvalidParams(format!(
                "damping must be finite and negative, got {}",
                self.damping
            )));
        }
        if !self.omega.is_finite() || self.omega <= 0.0 {
            return Err(OscError::InvalidParams(format!(
                "omega must be finite and positive, got {}",
                self.omega
            )));
        }
        let period = self.period();
        if !self.dt.is_finite() || self.dt <= 0.0 || self.dt >= period / 20.0 {
            return Err(OscError::InvalidParams(format!(
                "dt must lie in (0, period/20) = (0, {}), got {}",
                period / 20.0,
                self.dt
            )));
        }
        if !self.t_end.is_finite() || self.t_end < period {
            return Err(OscError::InvalidParams(format!(
                "t_end must cover at least one period ({period}), got {}",
                self.t_end
            )));
        }
        Ok(())
    }

    /// Same parameters with a different horizon.
    pub fn with_t_end(&self, t_end: f64) -> Result<Self> {
        Self::new(self.damping, self.omega, self.dt, t_end)
    }
}

impl Default for OscillatorParams {
    /// Unit-period oscillator: `b = -0.2`, `omega = 2*pi`, 256 samples per
    /// period, ten-period horizon.
    fn default() -> Self {
        OscillatorParams::new(-0.2, TAU, 1.0 / 256.0, 10.0).expect("default params are valid")
    }
}
