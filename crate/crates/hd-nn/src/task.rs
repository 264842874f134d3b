//! Synthetic desk-scale classification task.
//!
//! Class k's prototype puts a pi/2 phase on every position congruent to k
//! (mod classes) and 0 elsewhere; samples are the prototype plus wrapped
//! Gaussian phase noise. Nearby prototypes overlap (similarity 0.25 for the
//! default shape), so the task is separable but not trivial at sigma 0.5.

use fhrr_core::{wrap_phase, PhaseSymbol, Seed};
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use crate::{NnError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SyntheticTaskConfig {
    pub classes: usize,
    pub dim: usize,
    pub train_per_class: usize,
    pub test_per_class: usize,
    pub noise_sigma: f64,
}

impl Default for SyntheticTaskConfig {
    fn default() -> Self {
        Self {
            classes: 3,
            dim: 8,
            train_per_class: 200,
            test_per_class: 100,
            noise_sigma: 0.5,
        }
    }
}

impl SyntheticTaskConfig {
    pub fn validate(&self) -> Result<()> {
        if self.classes < 2 {
            return Err(NnError::InvalidInput(format!(
                "need at least 2 classes, got {}",
                self.classes
            )));
        }
        if self.dim < self.classes {
            return Err(NnError::InvalidInput(format!(
                "dimension {} cannot separate {} classes",
                self.dim, self.classes
            )));
        }
        if self.train_per_class == 0 || self.test_per_class == 0 {
            return Err(NnError::InvalidInput("empty split requested".into()));
        }
        if !self.noise_sigma.is_finite() || self.noise_sigma < 0.0 {
            return Err(NnError::InvalidInput(format!(
                "noise sigma must be finite and non-negative, got {}",
                self.noise_sigma
            )));
        }
        Ok(())
    }

    pub fn prototype(&self, class: usize) -> Result<PhaseSymbol> {
        if class >= self.classes {
            return Err(NnError::InvalidInput(format!(
                "class {class} out of range for {} classes",
                self.classes
            )));
        }
        let phases = (0..self.dim)
            .map(|j| if j % self.classes == class { FRAC_PI_2 } else { 0.0 })
            .collect();
        PhaseSymbol::new(phases).map_err(Into::into)
    }
}

/// Deterministic train/test split: labels cycle `i % classes` and all noise
/// comes off a single stream of `seed`, train first, then test.
pub fn synthetic_split(
    config: &SyntheticTaskConfig,
    seed: Seed,
) -> Result<(Vec<(PhaseSymbol, usize)>, Vec<(PhaseSymbol, usize)>)> {
    config.validate()?;
    let prototypes: Vec<PhaseSymbol> = (0..config.classes)
        .map(|c| config.prototype(c))
        .collect::<Result<_>>()?;
    let noise = Normal::new(0.0, config.noise_sigma)
        .map_err(|e| NnError::InvalidInput(format!("bad noise distribution: {e}")))?;
    let mut rng = seed.rng();
    let mut draw = |count: usize| -> Result<Vec<(PhaseSymbol, usize)>> {
        (0..count)
            .map(|i| {
                let class = i % config.classes;
                let phases = prototypes[class]
                    .phases()
                    .iter()
                    .map(|p| wrap_phase(p + noise.sample(&mut rng)))
                    .collect();
                Ok((PhaseSymbol::new(phases)?, class))
            })
            .collect()
    };
    let train = draw(config.train_per_class * config.classes)?;
    let test = draw(config.test_per_class * config.classes)?;
    Ok((train, test))
}
