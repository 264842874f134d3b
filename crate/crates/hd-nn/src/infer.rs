//! Oscillator-substrate execution of a trained network.
//!
//! The trained weights are plain real numbers; running the network on
//! oscillators means replacing each layer's complex row sum with a weighted
//! superposition of settled oscillator states. Channels are normalized to
//! unit magnitude before the sum (a channel's envelope records how long it
//! has decayed, not signal) and each output row keeps whatever magnitude
//! the superposition produced — it is re-normalized at the next layer or
//! read out through `arg` at the end, where magnitude is irrelevant.
//!
//! Also here: the direct-drive demo, where the input layer is excited by
//! continuous current pulses instead of spikes. A narrow Gaussian bump
//! placed where an encoding spike would fall behaves like a blurred
//! impulse, so the bank still settles onto the symbol's phases.

use fhrr_core::{PhaseSymbol, EPS_MAG};
use num_complex::Complex64;
use osc_backend::{
    decode_phase, integrate_current, refresh_bank, settle_horizon, spike_settle, Chaining,
    OscillatorBank, OscillatorParams, ReferenceOscillator, SpikeDriveConfig,
};
use std::f64::consts::TAU;

use crate::matrix::Matrix;
use crate::{NnError, Result};

/// How the oscillator forward pass is wired.
#[derive(Debug, Clone, PartialEq)]
pub struct OscInference {
    pub params: OscillatorParams,
    pub drive: SpikeDriveConfig,
    pub chaining: Chaining,
}

impl Default for OscInference {
    fn default() -> Self {
        Self {
            params: OscillatorParams::default(),
            drive: SpikeDriveConfig::default(),
            chaining: Chaining::ReEncode,
        }
    }
}

/// One layer on the substrate: normalize the input channels, take the
/// real-weighted superposition per output row.
pub fn osc_layer(bank: &OscillatorBank, w: &Matrix) -> Result<OscillatorBank> {
    if bank.dim() != w.cols() {
        return Err(NnError::ShapeMismatch(format!(
            "bank has {} channels but the weight matrix has {} columns",
            bank.dim(),
            w.cols()
        )));
    }
    let unit = bank.normalized()?;
    let mut states = Vec::with_capacity(w.rows());
    for r in 0..w.rows() {
        let mut s = Complex64::default();
        let mut scale = 0.0;
        for (wk, zk) in w.row(r).iter().zip(unit.states()) {
            s += wk * zk;
            scale += wk.abs();
        }
        if s.norm() < EPS_MAG * scale.max(1.0) {
            return Err(NnError::DegenerateRow {
                row: r,
                magnitude: s.norm(),
            });
        }
        states.push(s);
    }
    OscillatorBank::from_states(states, bank.params().clone(), bank.t()).map_err(Into::into)
}

/// Full oscillator forward pass: settle the input symbol, run both layers,
/// decode class phases. Between the layers the configured chaining policy
/// applies — under re-encode the hidden phases are read out and settled
/// afresh, under chained the superposed states feed layer two directly.
pub fn osc_mlp(
    x: &PhaseSymbol,
    w1: &Matrix,
    w2: &Matrix,
    inference: &OscInference,
) -> Result<PhaseSymbol> {
    let (bank, reference) = spike_settle(x, &inference.params, &inference.drive)?;
    let hidden = osc_layer(&bank, w1)?;
    let (hidden, reference) =
        refresh_bank(&hidden, &reference, &inference.drive, inference.chaining)?;
    let out = osc_layer(&hidden, w2)?;
    decode_phase(&out, &reference).map_err(Into::into)
}

/// Oscillator-backend accuracy on a labeled set.
pub fn evaluate_osc(
    data: &[(PhaseSymbol, usize)],
    w1: &Matrix,
    w2: &Matrix,
    inference: &OscInference,
) -> Result<f64> {
    if data.is_empty() {
        return Err(NnError::InvalidInput("empty evaluation set".into()));
    }
    let mut correct = 0usize;
    for (x, class) in data {
        let y = osc_mlp(x, w1, w2, inference)?;
        correct += usize::from(crate::layer::predict_class(&y)? == *class);
    }
    Ok(correct as f64 / data.len() as f64)
}

/// Fraction of samples where the two execution modes pick the same class —
/// labels play no part.
pub fn backend_agreement(
    inputs: &[PhaseSymbol],
    w1: &Matrix,
    w2: &Matrix,
    inference: &OscInference,
) -> Result<f64> {
    if inputs.is_empty() {
        return Err(NnError::InvalidInput("empty input set".into()));
    }
    let mut agree = 0usize;
    for x in inputs {
        let conventional = crate::layer::predict_class(&crate::layer::hd_mlp(x, w1, w2)?)?;
        let oscillatory = crate::layer::predict_class(&osc_mlp(x, w1, w2, inference)?)?;
        agree += usize::from(conventional == oscillatory);
    }
    Ok(agree as f64 / inputs.len() as f64)
}

/// `exp(-((t - mu) / (2 sigma))^2)`: the timing-pulse bump.
pub fn gaussian_pulse(mu: f64, sigma: f64, t: f64) -> f64 {
    let z = (t - mu) / (2.0 * sigma);
    (-z * z).exp()
}

/// Shape of the direct-drive current pulse. `unit_weight` picks the
/// amplitude that makes the pulse integrate to 1, i.e. deposit the same
/// net kick as a unit-weight spike.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseShape {
    pub sigma: f64,
    pub amplitude: f64,
}

impl PulseShape {
    pub fn unit_weight(sigma: f64) -> Self {
        // integral of exp(-((t-mu)/(2 sigma))^2) dt = 2 sigma sqrt(pi)
        Self {
            sigma,
            amplitude: 1.0 / (2.0 * sigma * std::f64::consts::PI.sqrt()),
        }
    }

    fn validate(&self, dt: f64) -> Result<()> {
        if !(self.sigma.is_finite() && self.sigma > 0.0)
            || !(self.amplitude.is_finite() && self.amplitude > 0.0)
        {
            return Err(NnError::InvalidInput(format!(
                "pulse needs positive finite sigma and amplitude, got {self:?}"
            )));
        }
        if self.sigma < 2.0 * dt {
            return Err(NnError::InvalidInput(format!(
                "pulse sigma {} is under-resolved by the integration step {dt}",
                self.sigma
            )));
        }
        Ok(())
    }
}

/// Direct-drive demo: excite a resting bank with one Gaussian current pulse
/// per period per channel, centered where that channel's encoding spike
/// would fire, and return the settled bank plus its reference. This is the
/// continuous-current analogue of the spike pipeline — same timing code,
/// smooth injection — exposed at kernel level only.
pub fn direct_drive_settle(
    symbol: &PhaseSymbol,
    params: &OscillatorParams,
    pulse: &PulseShape,
    settle_periods: u32,
) -> Result<(OscillatorBank, ReferenceOscillator)> {
    params.validate()?;
    pulse.validate(params.dt)?;
    if settle_periods == 0 {
        return Err(NnError::InvalidInput(
            "settle_periods must be at least 1".into(),
        ));
    }
    let period = params.period();
    let horizon = settle_horizon(params, settle_periods);
    let centers: Vec<Vec<f64>> = symbol
        .phases()
        .iter()
        .map(|&phi| {
            let offset = (-phi).rem_euclid(TAU) / params.omega;
            (0..settle_periods)
                .map(|m| m as f64 * period + offset)
                .collect()
        })
        .collect();

    let run_params = params.with_t_end(horizon)?;
    let rest = OscillatorBank::at_rest(symbol.dim(), run_params.clone())?;
    let current = |channel: usize, t: f64| -> f64 {
        centers[channel]
            .iter()
            .map(|&mu| pulse.amplitude * gaussian_pulse(mu, pulse.sigma, t))
            .sum()
    };
    let trajectory = integrate_current(&rest, current)?;
    let bank = trajectory.final_bank();
    let reference = ReferenceOscillator::analytic(&run_params, bank.t())?;
    Ok((bank, reference))
}
