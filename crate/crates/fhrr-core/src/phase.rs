use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::{FhrrError, Result};

/// Magnitude floor below which a complex superposition is treated as
/// cancelled and its angle as undefined.
pub const EPS_MAG: f64 = 1e-12;

/// Wrap an angle into the canonical range `(-pi, pi]`.
///
/// The boundary is closed on the positive side: `-pi` maps to `pi`, so every
/// angle has exactly one representative.
pub fn wrap_phase(x: f64) -> f64 {
    let r = x.rem_euclid(TAU); // [0, 2*pi), modulo fp rounding at the seam
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// A symbol: a fixed-length vector of phase angles, all in `(-pi, pi]`.
///
/// Equality is exact elementwise equality; use [`crate::similarity`] for the
/// graded comparison the algebra is built around.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct PhaseSymbol {
    phases: Vec<f64>,
}

impl PhaseSymbol {
    /// Build a symbol from raw angles, wrapping each into canonical range.
    ///
    /// Fails on an empty vector or any non-finite entry.
    pub fn new(phases: Vec<f64>) -> Result<Self> {
        if phases.is_empty() {
            return Err(FhrrError::ZeroDimension);
        }
        if phases.len() > u32::MAX as usize {
            return Err(FhrrError::InvalidRecord(format!(
                "dimension {} exceeds the binary record limit",
                phases.len()
            )));
        }
        let mut wrapped = phases;
        for (index, p) in wrapped.iter_mut().enumerate() {
            if !p.is_finite() {
                return Err(FhrrError::NonFinitePhase { index });
            }
            *p = wrap_phase(*p);
        }
        Ok(Self { phases: wrapped })
    }

    /// The all-zero symbol, the identity element of binding.
    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![0.0; n])
    }

    /// Number of phase elements.
    pub fn dim(&self) -> usize {
        self.phases.len()
    }

    /// The canonical phase angles.
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// Consume the symbol and return its angles.
    pub fn into_phases(self) -> Vec<f64> {
        self.phases
    }
}

impl TryFrom<Vec<f64>> for PhaseSymbol {
    type Error = FhrrError;

    fn try_from(phases: Vec<f64>) -> Result<Self> {
        Self::new(phases)
    }
}

impl From<PhaseSymbol> for Vec<f64> {
    fn from(s: PhaseSymbol) -> Self {
        s.phases
    }
}

/// A similarity score in `[-1, 1]`; `1` is identity, `0` quasi-orthogonal,
/// `-1` antipodal.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Similarity(f64);

impl Similarity {
    /// Clamp a raw mean-cosine into the valid range (guards fp overshoot).
    pub fn new(value: f64) -> Self {
        Similarity(value.clamp(-1.0, 1.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// The paired distance, `1 - similarity`, in `[0, 2]`.
    pub fn distance(self) -> f64 {
        1.0 - self.0
    }
}
