//! The two execution substrates behind one operation set.
//!
//! Algorithm code in this crate is written against [`HdOps`] and never looks
//! at the symbol representation. [`PhaseOps`] computes directly on phase
//! vectors. [`OscOps`] pushes every symbol through the spike-drive pipeline
//! and runs the state-domain operations on settled oscillator banks, which
//! is how the same algorithm behaves when the algebra is carried by a
//! physical-style substrate instead of by angle arithmetic.

use fhrr_core::PhaseSymbol;
use osc_backend::{
    decode_phase, osc_bind, osc_bundle, osc_bundle_weighted, osc_similarity, osc_unbind,
    refresh_bank, spike_settle, Chaining, OscillatorBank, OscillatorParams, ReferenceOscillator,
    SpikeDriveConfig,
};

use crate::Result;

/// The operation set algorithms are allowed to use, abstracted over how
/// symbols are physically represented.
pub trait HdOps {
    type Sym: Clone;

    /// Bring a phase symbol into this backend's working representation.
    fn encode(&self, symbol: &PhaseSymbol) -> Result<Self::Sym>;
    /// Read a working symbol back out as phases.
    fn decode(&self, sym: &Self::Sym) -> Result<PhaseSymbol>;
    fn bind(&self, a: &Self::Sym, b: &Self::Sym) -> Result<Self::Sym>;
    fn unbind(&self, bound: &Self::Sym, key: &Self::Sym) -> Result<Self::Sym>;
    fn bundle(&self, items: &[Self::Sym]) -> Result<Self::Sym>;
    fn bundle_weighted(&self, items: &[Self::Sym], weights: &[f64]) -> Result<Self::Sym>;
    fn similarity(&self, a: &Self::Sym, b: &Self::Sym) -> Result<f64>;
}

/// Direct phase-vector arithmetic. Stateless.
#[derive(Debug, Clone, Copy, Default)]
pub struct PhaseOps;

impl HdOps for PhaseOps {
    type Sym = PhaseSymbol;

    fn encode(&self, symbol: &PhaseSymbol) -> Result<PhaseSymbol> {
        Ok(symbol.clone())
    }

    fn decode(&self, sym: &PhaseSymbol) -> Result<PhaseSymbol> {
        Ok(sym.clone())
    }

    fn bind(&self, a: &PhaseSymbol, b: &PhaseSymbol) -> Result<PhaseSymbol> {
        Ok(fhrr_core::bind(a, b)?)
    }

    fn unbind(&self, bound: &PhaseSymbol, key: &PhaseSymbol) -> Result<PhaseSymbol> {
        Ok(fhrr_core::unbind(bound, key)?)
    }

    fn bundle(&self, items: &[PhaseSymbol]) -> Result<PhaseSymbol> {
        Ok(fhrr_core::bundle(items)?)
    }

    fn bundle_weighted(&self, items: &[PhaseSymbol], weights: &[f64]) -> Result<PhaseSymbol> {
        Ok(fhrr_core::bundle_weighted(items, weights)?)
    }

    fn similarity(&self, a: &PhaseSymbol, b: &PhaseSymbol) -> Result<f64> {
        Ok(fhrr_core::similarity(a, b)?.value())
    }
}

/// Oscillator-bank execution: symbols are spike-driven into settled banks
/// and operations run in the complex state domain.
#[derive(Debug, Clone)]
pub struct OscOps {
    params: OscillatorParams,
    drive: SpikeDriveConfig,
    chaining: Chaining,
}

impl OscOps {
    pub fn new(params: OscillatorParams, drive: SpikeDriveConfig, chaining: Chaining) -> Self {
        Self {
            params,
            drive,
            chaining,
        }
    }

    pub fn chaining(&self) -> Chaining {
        self.chaining
    }

    pub fn params(&self) -> &OscillatorParams {
        &self.params
    }

    fn reference_at(&self, t: f64) -> Result<ReferenceOscillator> {
        Ok(ReferenceOscillator::analytic(&self.params, t)?)
    }

    /// Apply the configured chaining policy to an operation result.
    fn settle_policy(&self, bank: OscillatorBank) -> Result<OscillatorBank> {
        let reference = self.reference_at(bank.t())?;
        let (bank, _) = refresh_bank(&bank, &reference, &self.drive, self.chaining)?;
        Ok(bank)
    }
}

impl Default for OscOps {
    fn default() -> Self {
        Self::new(
            OscillatorParams::default(),
            SpikeDriveConfig::default(),
            Chaining::ReEncode,
        )
    }
}

impl HdOps for OscOps {
    type Sym = OscillatorBank;

    fn encode(&self, symbol: &PhaseSymbol) -> Result<OscillatorBank> {
        let (bank, _) = spike_settle(symbol, &self.params, &self.drive)?;
        Ok(bank)
    }

    fn decode(&self, sym: &OscillatorBank) -> Result<PhaseSymbol> {
        Ok(decode_phase(sym, &self.reference_at(sym.t())?)?)
    }

    fn bind(&self, a: &OscillatorBank, b: &OscillatorBank) -> Result<OscillatorBank> {
        let reference = self.reference_at(a.t())?;
        self.settle_policy(osc_bind(a, b, &reference)?)
    }

    fn unbind(&self, bound: &OscillatorBank, key: &OscillatorBank) -> Result<OscillatorBank> {
        let reference = self.reference_at(bound.t())?;
        self.settle_policy(osc_unbind(bound, key, &reference)?)
    }

    fn bundle(&self, items: &[OscillatorBank]) -> Result<OscillatorBank> {
        self.settle_policy(osc_bundle(items)?)
    }

    fn bundle_weighted(&self, items: &[OscillatorBank], weights: &[f64]) -> Result<OscillatorBank> {
        self.settle_policy(osc_bundle_weighted(items, weights)?)
    }

    fn similarity(&self, a: &OscillatorBank, b: &OscillatorBank) -> Result<f64> {
        Ok(osc_similarity(a, b)?.value())
    }
}

/// Runtime-selected backend, for callers that pick by configuration rather
/// than by type.
#[derive(Debug, Clone)]
pub enum Backend {
    Phase(PhaseOps),
    Oscillator(OscOps),
}

impl Backend {
    pub fn phase() -> Self {
        Backend::Phase(PhaseOps)
    }

    pub fn oscillator(params: OscillatorParams, drive: SpikeDriveConfig, chaining: Chaining) -> Self {
        Backend::Oscillator(OscOps::new(params, drive, chaining))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Backend::Phase(_) => "phase",
            Backend::Oscillator(_) => "oscillator",
        }
    }
}
