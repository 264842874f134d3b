//! State-domain counterparts of the phase operations.
//!
//! All of these act on banks sampled at the same instant with the same
//! parameters. Similarity, bind, and unbind normalize their operands to unit
//! magnitude first (angles carry the information; envelopes merely decay),
//! while bundle/unbundle stay linear in the raw states so that unbundling is
//! the exact algebraic inverse of bundling.

use fhrr_core::{wrap_phase, PhaseSymbol, Similarity, EPS_MAG};
use num_complex::Complex64;

use crate::bank::{OscillatorBank, ReferenceOscillator};
use crate::{OscError, Result};

fn check_pair(a: &OscillatorBank, b: &OscillatorBank) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(OscError::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    if a.params().omega != b.params().omega || a.params().damping != b.params().damping {
        return Err(OscError::Incompatible(
            "banks have different dynamics (omega/damping)".into(),
        ));
    }
    if a.t() != b.t() {
        return Err(OscError::Incompatible(format!(
            "banks sampled at different times: {} vs {}",
            a.t(),
            b.t()
        )));
    }
    Ok(())
}

fn check_reference(bank: &OscillatorBank, reference: &ReferenceOscillator) -> Result<Complex64> {
    if reference.params().omega != bank.params().omega
        || reference.params().damping != bank.params().damping
    {
        return Err(OscError::Incompatible(
            "reference has different dynamics (omega/damping)".into(),
        ));
    }
    if reference.t() != bank.t() {
        return Err(OscError::Incompatible(format!(
            "reference sampled at {} but bank at {}",
            reference.t(),
            bank.t()
        )));
    }
    let r = reference.state();
    if r.norm() < EPS_MAG {
        return Err(OscError::DegenerateReference);
    }
    Ok(r / r.norm())
}

/// Read phases out of a bank: elementwise angle relative to the reference,
/// wrapped to canonical range. Because every channel rotates at the same
/// frequency, the result does not depend on the decode instant (as long as
/// bank and reference are sampled together).
pub fn decode_phase(bank: &OscillatorBank, reference: &ReferenceOscillator) -> Result<PhaseSymbol> {
    check_reference(bank, reference)?;
    let ref_arg = reference.arg()?;
    let mut phases = Vec::with_capacity(bank.dim());
    for (channel, z) in bank.states().iter().enumerate() {
        if z.norm() < EPS_MAG {
            return Err(OscError::DegenerateState { channel });
        }
        phases.push(wrap_phase(z.arg() - ref_arg));
    }
    Ok(PhaseSymbol::new(phases)?)
}

/// Per-channel similarity values via the chord construction: with both
/// states on the unit circle, `|z0 + z1| = 2 * cos(dphi / 2)`, so
/// `cos(2 * acos(|z0 + z1| / 2))` recovers `cos(dphi)` per channel.
pub fn osc_similarity_elements(a: &OscillatorBank, b: &OscillatorBank) -> Result<Vec<f64>> {
    check_pair(a, b)?;
    let an = a.normalized()?;
    let bn = b.normalized()?;
    Ok(an
        .states()
        .iter()
        .zip(bn.states())
        .map(|(za, zb)| {
            let half_chord = ((za + zb).norm() / 2.0).clamp(0.0, 1.0);
            (2.0 * half_chord.acos()).cos()
        })
        .collect())
}

/// Mean of [`osc_similarity_elements`], in `[-1, 1]`.
pub fn osc_similarity(a: &OscillatorBank, b: &OscillatorBank) -> Result<Similarity> {
    let elems = osc_similarity_elements(a, b)?;
    let mean = elems.iter().sum::<f64>() / elems.len() as f64;
    Ok(Similarity::new(mean))
}

/// Superpose banks: normalize each member to unit magnitude (envelopes are
/// an artifact of how long each channel has decayed, not signal) and take
/// the elementwise mean. The output keeps its sub-unit magnitude so that
/// [`osc_unbundle`] can peel members back off exactly.
pub fn osc_bundle(banks: &[OscillatorBank]) -> Result<OscillatorBank> {
    let ones = vec![1.0; banks.len()];
    osc_bundle_weighted(banks, &ones)
}

/// Weighted superposition: each normalized member is scaled by its weight
/// before summing. Negative weights flip a member to its antipode, matching
/// the phase-domain weighted bundle.
pub fn osc_bundle_weighted(banks: &[OscillatorBank], weights: &[f64]) -> Result<OscillatorBank> {
    let first = banks.first().ok_or(fhrr_core::FhrrError::EmptyBundle)?;
    if weights.len() != banks.len() {
        return Err(OscError::Fhrr(fhrr_core::FhrrError::WeightCountMismatch {
            weights: weights.len(),
            inputs: banks.len(),
        }));
    }
    for (index, w) in weights.iter().enumerate() {
        if !w.is_finite() {
            return Err(OscError::Fhrr(fhrr_core::FhrrError::NonFinitePhase {
                index,
            }));
        }
    }
    for b in &banks[1..] {
        check_pair(first, b)?;
    }
    let mut unit = Vec::with_capacity(banks.len());
    for b in banks {
        unit.push(b.normalized()?);
    }
    let m = banks.len() as f64;
    let floor = EPS_MAG * weights.iter().map(|w| w.abs()).sum::<f64>().max(1.0);
    let mut states = Vec::with_capacity(first.dim());
    for k in 0..first.dim() {
        let sum: Complex64 = unit.iter().zip(weights).map(|(b, &w)| b.states()[k] * w).sum();
        if sum.norm() < floor {
            return Err(OscError::DegenerateState { channel: k });
        }
        states.push(sum / m);
    }
    OscillatorBank::from_states(states, first.params().clone(), first.t())
}

/// Invert a superposition: `m * bundled - sum(normalized others)` recovers
/// the one remaining member exactly, because bundling kept the scaled sum
/// of unit states.
pub fn osc_unbundle(
    bundled: &OscillatorBank,
    others: &[OscillatorBank],
    m: usize,
) -> Result<OscillatorBank> {
    if m == 0 {
        return Err(OscError::Fhrr(fhrr_core::FhrrError::EmptyBundle));
    }
    if m != others.len() + 1 {
        return Err(OscError::Fhrr(fhrr_core::FhrrError::BundleSizeMismatch {
            m,
            others: others.len(),
        }));
    }
    let mut unit = Vec::with_capacity(others.len());
    for o in others {
        check_pair(bundled, o)?;
        unit.push(o.normalized()?);
    }
    let mut states = Vec::with_capacity(bundled.dim());
    for k in 0..bundled.dim() {
        let mut z = bundled.states()[k] * m as f64;
        for o in &unit {
            z -= o.states()[k];
        }
        if z.norm() < EPS_MAG {
            return Err(OscError::DegenerateState { channel: k });
        }
        states.push(z);
    }
    OscillatorBank::from_states(states, bundled.params().clone(), bundled.t())
}

/// Antipode: elementwise `-Z`, a half-turn of every phase.
pub fn osc_negate(bank: &OscillatorBank) -> OscillatorBank {
    let states = bank.states().iter().map(|z| -z).collect();
    OscillatorBank::from_states(states, bank.params().clone(), bank.t())
        .expect("negation preserves finiteness")
}

/// Elementwise complex conjugate: the state reflected across the real axis,
/// i.e. the phase negated.
pub fn osc_conjugate(bank: &OscillatorBank) -> OscillatorBank {
    let states = bank.states().iter().map(|z| z.conj()).collect();
    OscillatorBank::from_states(states, bank.params().clone(), bank.t())
        .expect("conjugation preserves finiteness")
}

/// Bind in the state domain: with unit-normalized operands and reference,
/// `Z0 + Z0 * (Z1 - R) * conj(R)` collapses to `Z0 * exp(i*phi1)` — the
/// first operand rotated by the second's phase — while every term keeps
/// rotating at the common frequency (no frequency doubling; the rotating
/// factors cancel in the product).
pub fn osc_bind(
    a: &OscillatorBank,
    b: &OscillatorBank,
    reference: &ReferenceOscillator,
) -> Result<OscillatorBank> {
    check_pair(a, b)?;
    let r = check_reference(a, reference)?;
    let an = a.normalized()?;
    let bn = b.normalized()?;
    let states = an
        .states()
        .iter()
        .zip(bn.states())
        .map(|(z0, z1)| z0 + z0 * (z1 - r) * r.conj())
        .collect();
    OscillatorBank::from_states(states, a.params().clone(), a.t())
}

/// Invert a state-domain binding: `Z0 + Z0 * conj(Z1 - R) * R` rotates the
/// first operand by the negative of the second's phase.
pub fn osc_unbind(
    a: &OscillatorBank,
    b: &OscillatorBank,
    reference: &ReferenceOscillator,
) -> Result<OscillatorBank> {
    check_pair(a, b)?;
    let r = check_reference(a, reference)?;
    let an = a.normalized()?;
    let bn = b.normalized()?;
    let states = an
        .states()
        .iter()
        .zip(bn.states())
        .map(|(z0, z1)| z0 + z0 * (z1 - r).conj() * r)
        .collect();
    OscillatorBank::from_states(states, a.params().clone(), a.t())
}
