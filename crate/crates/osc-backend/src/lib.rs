//! Damped harmonic oscillator backend for the phase algebra.
//!
//! Every phase element maps to one complex oscillator state `Z` obeying
//! `dZ/dt = (b + i*omega) * Z + I(t)` with `b < 0`. Information lives in the
//! angle of `Z` relative to an undriven reference oscillator; magnitudes
//! decay and carry no meaning of their own.
//!
//! Between input impulses the equation is linear and autonomous, so the
//! integrator propagates states with the exact exponential solution and
//! applies impulses as instantaneous jumps — there is no step error on the
//! event-driven path. A fixed-step RK4 integrator is kept alongside it to
//! validate that choice and to support continuous (non-impulse) drive.

mod bank;
mod error;
mod integrate;
mod ops;
mod params;
mod pipeline;
mod spikes;

pub use bank::{OscillatorBank, ReferenceOscillator};
pub use error::OscError;
pub use integrate::{integrate, integrate_at, integrate_current, integrate_rk4, Trajectory};
pub use ops::{
    decode_phase, osc_bind, osc_bundle, osc_bundle_weighted, osc_conjugate, osc_negate,
    osc_similarity, osc_similarity_elements, osc_unbind, osc_unbundle,
};
pub use params::OscillatorParams;
pub use pipeline::{refresh_bank, settle_horizon, spike_settle, Chaining, SpikeDriveConfig};
pub use spikes::{encode_spikes, emit_spikes, EmittedSpikes, SpikeEvent, SpikeTrain};

pub type Result<T> = std::result::Result<T, OscError>;
