use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::phase::{wrap_phase, PhaseSymbol, Similarity, EPS_MAG};
use crate::{FhrrError, Result};

/// Draw a symbol with `n` phases sampled i.i.d. uniformly over `(-pi, pi]`.
///
/// Two draws from independent streams are quasi-orthogonal in expectation:
/// their similarity concentrates around zero with spread `~1/sqrt(2n)`.
pub fn random_symbol<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<PhaseSymbol> {
    if n == 0 {
        return Err(FhrrError::ZeroDimension);
    }
    // Map [0, 1) onto (-pi, pi] from the top so the closed end is reachable.
    let phases: Vec<f64> = (0..n).map(|_| PI - rng.gen::<f64>() * 2.0 * PI).collect();
    PhaseSymbol::new(phases)
}

/// Mean cosine of elementwise phase differences, in `[-1, 1]`.
pub fn similarity(a: &PhaseSymbol, b: &PhaseSymbol) -> Result<Similarity> {
    check_dims(a, b)?;
    let n = a.dim() as f64;
    let sum: f64 = a
        .phases()
        .iter()
        .zip(b.phases())
        .map(|(x, y)| (x - y).cos())
        .sum();
    Ok(Similarity::new(sum / n))
}

/// `1 - similarity`; zero for identical symbols, two for antipodal ones.
pub fn distance(a: &PhaseSymbol, b: &PhaseSymbol) -> Result<f64> {
    Ok(similarity(a, b)?.distance())
}

/// Bind two symbols: elementwise wrapped angle addition.
///
/// Binding is commutative, invertible via [`unbind`], and an isometry: it
/// preserves similarity between any pair of symbols bound to the same key.
pub fn bind(a: &PhaseSymbol, b: &PhaseSymbol) -> Result<PhaseSymbol> {
    check_dims(a, b)?;
    let phases = a
        .phases()
        .iter()
        .zip(b.phases())
        .map(|(x, y)| wrap_phase(x + y))
        .collect();
    PhaseSymbol::new(phases)
}

/// Invert a binding: elementwise wrapped angle subtraction.
pub fn unbind(bound: &PhaseSymbol, key: &PhaseSymbol) -> Result<PhaseSymbol> {
    check_dims(bound, key)?;
    let phases = bound
        .phases()
        .iter()
        .zip(key.phases())
        .map(|(x, y)| wrap_phase(x - y))
        .collect();
    PhaseSymbol::new(phases)
}

/// Bundle symbols into their superposition: elementwise argument of the sum
/// of unit phasors.
///
/// Fails with [`FhrrError::DegeneratePhase`] where the phasors cancel below
/// the magnitude floor (e.g. bundling a pair of antipodal angles).
pub fn bundle(inputs: &[PhaseSymbol]) -> Result<PhaseSymbol> {
    let ones = vec![1.0; inputs.len()];
    bundle_weighted(inputs, &ones)
}

/// Bundle with real weights applied to the unit phasors before summation.
///
/// Negative weights flip their phasor, so a weight of `-1` contributes the
/// antipodal symbol. Degeneracy is judged against the total absolute weight.
pub fn bundle_weighted(inputs: &[PhaseSymbol], weights: &[f64]) -> Result<PhaseSymbol> {
    if inputs.is_empty() {
        return Err(FhrrError::EmptyBundle);
    }
    if weights.len() != inputs.len() {
        return Err(FhrrError::WeightCountMismatch {
            weights: weights.len(),
            inputs: inputs.len(),
        });
    }
    let dim = inputs[0].dim();
    for s in &inputs[1..] {
        check_dims(&inputs[0], s)?;
    }
    for (index, w) in weights.iter().enumerate() {
        if !w.is_finite() {
            return Err(FhrrError::NonFinitePhase { index });
        }
    }
    let scale = weights.iter().map(|w| w.abs()).sum::<f64>().max(1.0);
    let mut phases = Vec::with_capacity(dim);
    for k in 0..dim {
        let mut sum = Complex64::new(0.0, 0.0);
        for (s, &w) in inputs.iter().zip(weights) {
            let p = s.phases()[k];
            sum += Complex64::new(w * p.cos(), w * p.sin());
        }
        if sum.norm() < EPS_MAG * scale {
            return Err(FhrrError::DegeneratePhase { index: k });
        }
        phases.push(wrap_phase(sum.im.atan2(sum.re)));
    }
    PhaseSymbol::new(phases)
}

/// Remove known inputs from a bundle of `m` symbols and recover the one left.
///
/// A bundle keeps only the angle of the superposition, not its magnitude, so
/// the inverse first rescales the bundled direction to the magnitude the full
/// sum must have had: elementwise, the scale `t` solves
/// `|t * exp(i*phi') - sum(others)| = 1`, placing the removed remainder back
/// on the unit circle. With a single removed input (`m = 2`) the recovery is
/// exact apart from the antipodal sibling; with more removed inputs the
/// larger root is taken, which assumes the remainder points into the same
/// half-plane as the bundle (the typical case, but no longer unique).
pub fn unbundle(bundled: &PhaseSymbol, others: &[PhaseSymbol], m: usize) -> Result<PhaseSymbol> {
    if m == 0 {
        return Err(FhrrError::EmptyBundle);
    }
    if m != others.len() + 1 {
        return Err(FhrrError::BundleSizeMismatch {
            m,
            others: others.len(),
        });
    }
    for s in others {
        check_dims(bundled, s)?;
    }
    let mut phases = Vec::with_capacity(bundled.dim());
    for k in 0..bundled.dim() {
        let dir = Complex64::from_polar(1.0, bundled.phases()[k]);
        let mut rest = Complex64::new(0.0, 0.0);
        for s in others {
            let p = s.phases()[k];
            rest += Complex64::new(p.cos(), p.sin());
        }
        // Solve t^2 - 2*t*Re(rest * conj(dir)) + |rest|^2 - 1 = 0 for t >= 0.
        let along = (rest * dir.conj()).re;
        let disc = along * along - (rest.norm_sqr() - 1.0);
        if disc < 0.0 {
            return Err(FhrrError::NoPreimage { index: k });
        }
        let t = along + disc.sqrt();
        if t < EPS_MAG {
            // Only the antipodal degenerate solution remains.
            return Err(FhrrError::DegeneratePhase { index: k });
        }
        let remainder = dir * t - rest;
        if remainder.norm() < EPS_MAG {
            return Err(FhrrError::DegeneratePhase { index: k });
        }
        phases.push(wrap_phase(remainder.im.atan2(remainder.re)));
    }
    PhaseSymbol::new(phases)
}

fn check_dims(a: &PhaseSymbol, b: &PhaseSymbol) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(FhrrError::DimensionMismatch {
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Seed;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn similarity_hand_values() {
        let a = PhaseSymbol::new(vec![0.0, FRAC_PI_2]).unwrap();
        let b = PhaseSymbol::new(vec![0.0, -FRAC_PI_2]).unwrap();
        // cos(0) + cos(pi) averages to zero.
        assert!(similarity(&a, &b).unwrap().value().abs() < 1e-15);
        assert_eq!(similarity(&a, &a).unwrap().value(), 1.0);
        let anti = PhaseSymbol::new(vec![PI, -FRAC_PI_2]).unwrap();
        assert!((similarity(&a, &anti).unwrap().value() + 1.0).abs() < 1e-15);
        assert_eq!(distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn similarity_rejects_dimension_mismatch() {
        let a = PhaseSymbol::zeros(3).unwrap();
        let b = PhaseSymbol::zeros(4).unwrap();
        assert_eq!(
            similarity(&a, &b),
            Err(FhrrError::DimensionMismatch {
                expected: 3,
                got: 4
            })
        );
    }

    #[test]
    fn bind_wraps_past_the_seam() {
        let a = PhaseSymbol::new(vec![FRAC_PI_2]).unwrap();
        let b = PhaseSymbol::new(vec![3.0 * PI / 4.0]).unwrap();
        let c = bind(&a, &b).unwrap();
        assert!((c.phases()[0] - (-3.0 * PI / 4.0)).abs() < 1e-15);
    }

    #[test]
    fn bind_identity_and_inverse() {
        let mut rng = Seed::new(11).rng();
        let a = random_symbol(64, &mut rng).unwrap();
        let zero = PhaseSymbol::zeros(64).unwrap();
        assert_eq!(bind(&a, &zero).unwrap(), a);
        let b = random_symbol(64, &mut rng).unwrap();
        let round = unbind(&bind(&a, &b).unwrap(), &b).unwrap();
        for (x, y) in round.phases().iter().zip(a.phases()) {
            assert!(wrap_phase(x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn bundle_single_input_is_identity() {
        let mut rng = Seed::new(3).rng();
        let a = random_symbol(16, &mut rng).unwrap();
        let out = bundle(std::slice::from_ref(&a)).unwrap();
        for (x, y) in out.phases().iter().zip(a.phases()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn bundle_detects_antipodal_cancellation() {
        let a = PhaseSymbol::new(vec![0.25]).unwrap();
        let b = PhaseSymbol::new(vec![0.25 + PI]).unwrap();
        assert_eq!(
            bundle(&[a, b]),
            Err(FhrrError::DegeneratePhase { index: 0 })
        );
    }

    #[test]
    fn bundle_rejects_empty_input() {
        assert_eq!(bundle(&[]), Err(FhrrError::EmptyBundle));
    }

    #[test]
    fn weighted_bundle_respects_sign_and_count() {
        let a = PhaseSymbol::new(vec![0.3]).unwrap();
        // A weight of -1 contributes the antipode.
        let out = bundle_weighted(std::slice::from_ref(&a), &[-1.0]).unwrap();
        assert!((out.phases()[0] - wrap_phase(0.3 + PI)).abs() < 1e-12);
        assert_eq!(
            bundle_weighted(std::slice::from_ref(&a), &[1.0, 2.0]),
            Err(FhrrError::WeightCountMismatch {
                weights: 2,
                inputs: 1
            })
        );
        assert_eq!(
            bundle_weighted(std::slice::from_ref(&a), &[f64::NAN]),
            Err(FhrrError::NonFinitePhase { index: 0 })
        );
    }

    #[test]
    fn weighted_bundle_matches_plain_bundle_for_unit_weights() {
        let mut rng = Seed::new(9).rng();
        let xs: Vec<PhaseSymbol> = (0..3)
            .map(|_| random_symbol(32, &mut rng).unwrap())
            .collect();
        let plain = bundle(&xs).unwrap();
        let weighted = bundle_weighted(&xs, &[1.0; 3]).unwrap();
        assert_eq!(plain, weighted);
    }

    #[test]
    fn unbundle_single_is_identity() {
        let mut rng = Seed::new(5).rng();
        let a = random_symbol(16, &mut rng).unwrap();
        let out = unbundle(&a, &[], 1).unwrap();
        for (x, y) in out.phases().iter().zip(a.phases()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn unbundle_pair_roundtrip_is_exact() {
        let mut rng = Seed::new(6).rng();
        let a = random_symbol(256, &mut rng).unwrap();
        let b = random_symbol(256, &mut rng).unwrap();
        let bundled = bundle(&[a.clone(), b.clone()]).unwrap();
        let got = unbundle(&bundled, std::slice::from_ref(&b), 2).unwrap();
        for (x, y) in got.phases().iter().zip(a.phases()) {
            assert!(
                wrap_phase(x - y).abs() < 1e-9,
                "pair roundtrip drifted: {x} vs {y}"
            );
        }
    }

    #[test]
    fn unbundle_validates_size_argument() {
        let a = PhaseSymbol::zeros(4).unwrap();
        assert_eq!(
            unbundle(&a, &[], 2),
            Err(FhrrError::BundleSizeMismatch { m: 2, others: 0 })
        );
        assert_eq!(unbundle(&a, &[], 0), Err(FhrrError::EmptyBundle));
    }

    #[test]
    fn random_symbol_needs_a_dimension() {
        let mut rng = Seed::new(0).rng();
        assert!(matches!(
            random_symbol(0, &mut rng),
            Err(FhrrError::ZeroDimension)
        ));
    }
}
