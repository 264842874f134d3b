//! Flat serialization for symbols.
//!
//! Binary record layout: a `u32` little-endian dimension, then that many
//! IEEE-754 `f64` little-endian radian values. The JSON form is a bare array
//! of numbers (see the `serde` impls on [`PhaseSymbol`]).

use crate::{FhrrError, PhaseSymbol, Result};

impl PhaseSymbol {
    /// Encode as the flat binary record.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 + 8 * self.dim());
        out.extend_from_slice(&(self.dim() as u32).to_le_bytes());
        for p in self.phases() {
            out.extend_from_slice(&p.to_le_bytes());
        }
        out
    }

    /// Decode a flat binary record, validating length and phase values.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < 4 {
            return Err(FhrrError::InvalidRecord(
                "record shorter than the 4-byte dimension header".into(),
            ));
        }
        let dim = u32::from_le_bytes(bytes[..4].try_into().unwrap()) as usize;
        let expected = 4 + 8 * dim;
        if bytes.len() != expected {
            return Err(FhrrError::InvalidRecord(format!(
                "expected {expected} bytes for dimension {dim}, got {}",
                bytes.len()
            )));
        }
        let phases = bytes[4..]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        PhaseSymbol::new(phases)
    }

    /// Encode as the JSON array form.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("phase arrays always serialize")
    }

    /// Decode the JSON array form.
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| FhrrError::InvalidRecord(e.to_string()))
    }
}
