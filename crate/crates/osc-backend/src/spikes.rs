use std::f64::consts::TAU;

use fhrr_core::{PhaseSymbol, EPS_MAG};
use serde::{Deserialize, Serialize};

use crate::integrate::Trajectory;
use crate::params::OscillatorParams;
use crate::{OscError, Result};

/// One input impulse: at `time`, the receiving channel's state jumps by
/// `weight` along the real axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "(f64, f64)", into = "(f64, f64)")]
pub struct SpikeEvent {
    pub time: f64,
    pub weight: f64,
}

impl From<(f64, f64)> for SpikeEvent {
    fn from((time, weight): (f64, f64)) -> Self {
        SpikeEvent { time, weight }
    }
}

impl From<SpikeEvent> for (f64, f64) {
    fn from(e: SpikeEvent) -> Self {
        (e.time, e.weight)
    }
}

/// Per-channel impulse schedules, strictly increasing in time.
///
/// The JSON form is `{"channels": n, "omega": w, "events": [[[t, weight],
/// ...], ...]}` with one event list per channel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpikeTrainRepr", into = "SpikeTrainRepr")]
pub struct SpikeTrain {
    channels: usize,
    omega: f64,
    events: Vec<Vec<SpikeEvent>>,
}

#[derive(Serialize, Deserialize)]
struct SpikeTrainRepr {
    channels: usize,
    omega: f64,
    events: Vec<Vec<SpikeEvent>>,
}

impl TryFrom<SpikeTrainRepr> for SpikeTrain {
    type Error = OscError;

    fn try_from(r: SpikeTrainRepr) -> Result<Self> {
        if r.channels != r.events.len() {
            return Err(OscError::InvalidSpikeTrain(format!(
                "channel count {} does not match {} event lists",
                r.channels,
                r.events.len()
            )));
        }
        SpikeTrain::new(r.omega, r.events)
    }
}

impl From<SpikeTrain> for SpikeTrainRepr {
    fn from(t: SpikeTrain) -> Self {
        SpikeTrainRepr {
            channels: t.channels,
            omega: t.omega,
            events: t.events,
        }
    }
}

impl SpikeTrain {
    /// Validate and wrap per-channel event lists.
    pub fn new(omega: f64, events: Vec<Vec<SpikeEvent>>) -> Result<Self> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(OscError::InvalidSpikeTrain(format!(
                "omega must be finite and positive, got {omega}"
            )));
        }
        for (channel, list) in events.iter().enumerate() {
            let mut prev = f64::NEG_INFINITY;
            for e in list {
                if !e.time.is_finite() || e.time < 0.0 {
                    return Err(OscError::InvalidSpikeTrain(format!(
                        "channel {channel}: event time {} out of range",
                        e.time
                    )));
                }
                if e.time <= prev {
                    return Err(OscError::InvalidSpikeTrain(format!(
                        "channel {channel}: event times must be strictly increasing"
                    )));
                }
                if !e.weight.is_finite() {
                    return Err(OscError::InvalidSpikeTrain(format!(
                        "channel {channel}: non-finite weight"
                    )));
                }
                prev = e.time;
            }
        }
        Ok(SpikeTrain {
            channels: events.len(),
            omega,
            events,
        })
    }

    /// A drive with no events on any channel.
    pub fn empty(channels: usize, omega: f64) -> Self {
        SpikeTrain {
            channels,
            omega,
            events: vec![Vec::new(); channels],
        }
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn events(&self) -> &[Vec<SpikeEvent>] {
        &self.events
    }

    /// Total number of events across channels.
    pub fn event_count(&self) -> usize {
        self.events.iter().map(Vec::len).sum()
    }

    /// Multiply every event weight by `factor`.
    pub fn scale_weights(&mut self, factor: f64) {
        for list in &mut self.events {
            for e in list {
                e.weight *= factor;
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spike trains always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| OscError::InvalidRecord(e.to_string()))
    }
}

/// Translate a symbol into impulse timing: channel `k` fires once per
/// period, at the instants where an oscillator holding phase `phi_k` crosses
/// zero — `omega * t = -phi_k (mod 2*pi)`. Driving a bank with this train
/// therefore reproduces the encoded phases (see the integrate/decode
/// roundtrip tests), and re-emitting spikes from the settled bank recovers
/// the same timing.
pub fn encode_spikes(
    symbol: &PhaseSymbol,
    params: &OscillatorParams,
    cycles: u32,
) -> Result<SpikeTrain> {
    params.validate()?;
    if cycles == 0 {
        return Err(OscError::InvalidSpikeTrain(
            "cycle count must be at least 1".into(),
        ));
    }
    let period = params.period();
    let events = symbol
        .phases()
        .iter()
        .map(|&phi| {
            let offset = (-phi).rem_euclid(TAU) / params.omega; // [0, period)
            (0..cycles)
                .map(|j| SpikeEvent {
                    time: j as f64 * period + offset,
                    weight: 1.0,
                })
                .collect()
        })
        .collect();
    SpikeTrain::new(params.omega, events)
}

/// Spikes read back from a trajectory, plus the channels that never rose
/// above the magnitude floor and thus emitted nothing.
#[derive(Clone, Debug, PartialEq)]
pub struct EmittedSpikes {
    pub train: SpikeTrain,
    pub silent_channels: Vec<usize>,
}

/// Read spike timing back out of a trajectory: one event per period, where
/// the state's angle crosses zero from below. Crossing times are refined by
/// linear interpolation between samples, so timing error shrinks with the
/// sample step. Channels whose magnitude never exceeds the floor are
/// reported as silent instead of producing noise events.
pub fn emit_spikes(trajectory: &Trajectory) -> Result<EmittedSpikes> {
    let times = trajectory.times();
    if times.len() < 2 {
        return Err(OscError::InvalidSampleTimes(
            "spike emission needs at least two samples".into(),
        ));
    }
    let period = trajectory.params().period();
    let refractory = period / 2.0;
    let n = trajectory.dim();
    let mut events = vec![Vec::new(); n];
    let mut silent = Vec::new();

    for k in 0..n {
        let alive = (0..times.len()).any(|i| trajectory.state(i, k).norm() >= EPS_MAG);
        if !alive {
            silent.push(k);
            continue;
        }
        let mut last_fire = f64::NEG_INFINITY;
        // A state resting exactly on the positive real axis at the first
        // sample counts as a crossing at that instant.
        let z0 = trajectory.state(0, k);
        if z0.im == 0.0 && z0.re > 0.0 {
            events[k].push(SpikeEvent {
                time: times[0],
                weight: 1.0,
            });
            last_fire = times[0];
        }
        for i in 1..times.len() {
            let prev = trajectory.state(i - 1, k);
            let cur = trajectory.state(i, k);
            if !(prev.im < 0.0 && cur.im >= 0.0) {
                continue;
            }
            let frac = -prev.im / (cur.im - prev.im);
            let re = prev.re + frac * (cur.re - prev.re);
            if re <= 0.0 {
                continue; // crossing of the negative real axis
            }
            let t = times[i - 1] + frac * (times[i] - times[i - 1]);
            if t - last_fire < refractory {
                continue;
            }
            events[k].push(SpikeEvent {
                time: t,
                weight: 1.0,
            });
            last_fire = t;
        }
    }

    Ok(EmittedSpikes {
        train: SpikeTrain::new(trajectory.params().omega, events)?,
        silent_channels: silent,
    })
}
