use fhrr_core::{PhaseSymbol, EPS_MAG};
use num_complex::Complex64;

use crate::params::OscillatorParams;
use crate::{OscError, Result};

/// A bank of oscillator states sampled at one instant.
///
/// All channels share the parameters of `params` and the timestamp `t`,
/// which is what the superposition ops rely on. States are immutable from
/// the outside; integrators and ops return fresh banks.
#[derive(Clone, Debug, PartialEq)]
pub struct OscillatorBank {
    states: Vec<Complex64>,
    params: OscillatorParams,
    t: f64,
}

impl OscillatorBank {
    /// Seed a bank directly from phase angles: unit-magnitude states at
    /// `t = 0`. This is the analytic shortcut used by tests and by the
    /// identities; the spike pipeline reaches the same phases by driving a
    /// resting bank with impulses.
    pub fn from_symbol(symbol: &PhaseSymbol, params: OscillatorParams) -> Result<Self> {
        params.validate()?;
        let states = symbol
            .phases()
            .iter()
            .map(|&p| Complex64::from_polar(1.0, p))
            .collect();
        Ok(OscillatorBank {
            states,
            params,
            t: 0.0,
        })
    }

    /// A coherent resting bank: every channel starts at `1 + 0i`, i.e. phase
    /// zero. Spike-driven settling starts here, so the decaying memory of
    /// the rest state is what the settling transient consists of.
    pub fn at_rest(channels: usize, params: OscillatorParams) -> Result<Self> {
        if channels == 0 {
            return Err(OscError::Fhrr(fhrr_core::FhrrError::ZeroDimension));
        }
        params.validate()?;
        Ok(OscillatorBank {
            states: vec![Complex64::new(1.0, 0.0); channels],
            params,
            t: 0.0,
        })
    }

    /// Wrap raw states observed at time `t`.
    pub fn from_states(states: Vec<Complex64>, params: OscillatorParams, t: f64) -> Result<Self> {
        if states.is_empty() {
            return Err(OscError::Fhrr(fhrr_core::FhrrError::ZeroDimension));
        }
        params.validate()?;
        if !t.is_finite() || t < 0.0 {
            return Err(OscError::InvalidParams(format!(
                "bank timestamp must be finite and non-negative, got {t}"
            )));
        }
        for (channel, z) in states.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(OscError::IntegrationDiverged { channel, t });
            }
        }
        Ok(OscillatorBank { states, params, t })
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[Complex64] {
        &self.states
    }

    pub fn params(&self) -> &OscillatorParams {
        &self.params
    }

    /// The instant these states were sampled at.
    pub fn t(&self) -> f64 {
        self.t
    }

    /// The same bank with every state rescaled to unit magnitude.
    /// Fails if any channel has decayed below the magnitude floor.
    pub fn normalized(&self) -> Result<Self> {
        let mut states = Vec::with_capacity(self.states.len());
        for (channel, z) in self.states.iter().enumerate() {
            let r = z.norm();
            if r < EPS_MAG {
                return Err(OscError::DegenerateState { channel });
            }
            states.push(z / r);
        }
        Ok(OscillatorBank {
            states,
            params: self.params.clone(),
            t: self.t,
        })
    }
}

/// An undriven oscillator seeded at phase zero, used as the phase origin
/// when decoding.
///
/// `simulated` obtains the state by running the event-driven integrator with
/// an empty drive — the realistic path the experiments use — while
/// `analytic` writes down the closed-form solution directly. The two agree
/// to rounding because the integrator is exact between events; keeping both
/// lets tests certify that.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceOscillator {
    state: Complex64,
    params: OscillatorParams,
    t: f64,
}

impl ReferenceOscillator {
    /// Closed-form reference state at time `t`: `exp((b + i*omega) * t)`.
    pub fn analytic(params: &OscillatorParams, t: f64) -> Result<Self> {
        params.validate()?;
        if !t.is_finite() || t < 0.0 {
            return Err(OscError::InvalidParams(format!(
                "reference time must be finite and non-negative, got {t}"
            )));
        }
        let state = (params.lambda() * t).exp();
        Ok(ReferenceOscillator {
            state,
            params: params.clone(),
            t,
        })
    }

    /// Reference state obtained by integrating an undriven channel to `t`.
    pub fn simulated(params: &OscillatorParams, t: f64) -> Result<Self> {
        let bank = OscillatorBank::at_rest(1, params.clone())?;
        let empty = crate::spikes::SpikeTrain::empty(1, params.omega);
        let sampled = crate::integrate::integrate_at(&bank, &empty, &[t])?;
        let state = sampled
            .last()
            .expect("one sample requested")
            .states()[0];
        Ok(ReferenceOscillator {
            state,
            params: params.clone(),
            t,
        })
    }

    pub fn state(&self) -> Complex64 {
        self.state
    }

    pub fn params(&self) -> &OscillatorParams {
        &self.params
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// The reference angle, failing if the state has decayed away.
    pub fn arg(&self) -> Result<f64> {
        if self.state.norm() < EPS_MAG {
            return Err(OscError::DegenerateReference);
        }
        Ok(self.state.arg())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fhrr_core::{random_symbol, Seed};
    use std::f64::consts::{FRAC_PI_2, TAU};

    #[test]
    fn from_symbol_places_unit_states() {
        let sym = PhaseSymbol::new(vec![0.0, FRAC_PI_2]).unwrap();
        let bank = OscillatorBank::from_symbol(&sym, OscillatorParams::default()).unwrap();
        assert_eq!(bank.t(), 0.0);
        assert!((bank.states()[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((bank.states()[1] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn normalized_rescales_and_detects_collapse() {
        let params = OscillatorParams::default();
        let bank = OscillatorBank::from_states(
            vec![Complex64::new(3.0, 4.0), Complex64::new(0.5, 0.0)],
            params.clone(),
            1.0,
        )
        .unwrap();
        let unit = bank.normalized().unwrap();
        assert!((unit.states()[0].norm() - 1.0).abs() < 1e-15);
        assert!((unit.states()[0].arg() - bank.states()[0].arg()).abs() < 1e-15);

        let dead = OscillatorBank::from_states(
            vec![Complex64::new(0.0, 0.0)],
            params,
            1.0,
        )
        .unwrap();
        assert_eq!(
            dead.normalized(),
            Err(OscError::DegenerateState { channel: 0 })
        );
    }

    #[test]
    fn reference_modes_agree() {
        let params = OscillatorParams::default();
        for &t in &[0.0, 0.5, 3.25, 10.0] {
            let a = ReferenceOscillator::analytic(&params, t).unwrap();
            let s = ReferenceOscillator::simulated(&params, t).unwrap();
            assert!(
                (a.state() - s.state()).norm() < 1e-12,
                "reference modes disagree at t = {t}"
            );
        }
    }

    #[test]
    fn reference_phase_advances_at_omega() {
        let params = OscillatorParams::default();
        let r = ReferenceOscillator::analytic(&params, 0.25).unwrap();
        // Quarter period at omega = 2*pi is a quarter turn.
        assert!((r.arg().unwrap() - TAU / 4.0).abs() < 1e-12);
    }

    #[test]
    fn from_states_rejects_non_finite() {
        let params = OscillatorParams::default();
        let res = OscillatorBank::from_states(
            vec![Complex64::new(f64::NAN, 0.0)],
            params,
            0.0,
        );
        assert_eq!(
            res,
            Err(OscError::IntegrationDiverged { channel: 0, t: 0.0 })
        );
    }

    #[test]
    fn random_symbol_roundtrips_through_bank_seeding() {
        let mut rng = Seed::new(8).rng();
        let sym = random_symbol(32, &mut rng).unwrap();
        let bank = OscillatorBank::from_symbol(&sym, OscillatorParams::default()).unwrap();
        for (z, &p) in bank.states().iter().zip(sym.phases()) {
            assert!((z.arg() - p).abs() < 1e-15);
        }
    }
}
