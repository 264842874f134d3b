//! Resonator factorization: given a composite symbol known to be the
//! binding of one entry from each of several codebooks, recover which
//! entries. Each factor keeps a running guess; per sweep, the other guesses
//! are unbound from the composite and the remainder is cleaned up against
//! that factor's codebook via a similarity-weighted bundle. The guesses
//! sharpen each other until the argmax indices stop moving.

use fhrr_core::{PhaseSymbol, Seed};

use crate::backend::{Backend, HdOps};
use crate::{HdError, Result};

/// A factorization instance: the codebooks, the composite to be factored,
/// and (for harness scoring only) the indices that actually built it.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorProblem {
    pub factor_sets: Vec<Vec<PhaseSymbol>>,
    pub composite: PhaseSymbol,
    pub truth: Vec<usize>,
}

impl FactorProblem {
    /// Random instance: `factors` codebooks of `codebook_size` random
    /// symbols each; truth indices drawn uniformly; composite built by
    /// exact binding. Fully determined by the seed.
    pub fn random(factors: usize, codebook_size: usize, dim: usize, seed: Seed) -> Result<Self> {
        if factors < 2 {
            return Err(HdError::InvalidInput(format!(
                "need at least two factor sets, got {factors}"
            )));
        }
        if codebook_size == 0 {
            return Err(HdError::InvalidInput("empty codebook".into()));
        }
        let mut factor_sets = Vec::with_capacity(factors);
        for f in 0..factors {
            let child = seed.child(f as u64);
            let mut set = Vec::with_capacity(codebook_size);
            for k in 0..codebook_size {
                set.push(fhrr_core::random_symbol(
                    dim,
                    &mut child.child(k as u64).rng(),
                )?);
            }
            factor_sets.push(set);
        }
        use rand::Rng;
        let mut idx_rng = seed.child(factors as u64).rng();
        let truth: Vec<usize> = (0..factors)
            .map(|_| idx_rng.gen_range(0..codebook_size))
            .collect();
        let composite = compose(&factor_sets, &truth)?;
        Ok(Self {
            factor_sets,
            composite,
            truth,
        })
    }
}

/// Bind together one selected entry per codebook (left fold; binding is
/// commutative and associative so the order is cosmetic).
pub fn compose(factor_sets: &[Vec<PhaseSymbol>], indices: &[usize]) -> Result<PhaseSymbol> {
    if factor_sets.is_empty() {
        return Err(HdError::InvalidInput("no factor sets".into()));
    }
    if indices.len() != factor_sets.len() {
        return Err(HdError::InvalidInput(format!(
            "{} indices for {} factor sets",
            indices.len(),
            factor_sets.len()
        )));
    }
    let mut selected = Vec::with_capacity(indices.len());
    for (f, (&idx, set)) in indices.iter().zip(factor_sets).enumerate() {
        let sym = set.get(idx).ok_or(HdError::IndexOutOfRange {
            factor: f,
            index: idx,
            size: set.len(),
        })?;
        selected.push(sym);
    }
    let mut acc = selected[0].clone();
    for sym in &selected[1..] {
        acc = fhrr_core::bind(&acc, sym)?;
    }
    Ok(acc)
}

/// Knobs for the iteration loop.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonatorOptions {
    /// Sweep budget; the loop never runs longer than this.
    pub max_iterations: usize,
    /// Stop once the argmax indices have been stable for two consecutive
    /// sweeps. The answer at that point is already what the full budget
    /// would report, so this only trims the trace.
    pub early_exit: bool,
    /// Override the default starting point (the bundle of each full
    /// codebook) — useful for fixed-point probing.
    pub initial_guesses: Option<Vec<PhaseSymbol>>,
}

impl Default for ResonatorOptions {
    fn default() -> Self {
        Self {
            max_iterations: 20,
            early_exit: true,
            initial_guesses: None,
        }
    }
}

/// What one sweep looked like, for convergence plots and debugging.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    /// Argmax codebook index per factor (ties broken toward index 0).
    pub indices: Vec<usize>,
    /// Similarity of the binding of the current guesses to the composite.
    pub reconstruction_similarity: f64,
    /// Per factor: the full similarity vector of this sweep's cleanup input
    /// against the codebook. `indices` is the argmax of each row.
    pub codebook_similarities: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResonatorOutcome {
    /// Final answer: argmax index per factor at the last sweep.
    pub indices: Vec<usize>,
    /// Sweeps actually executed (= trace length).
    pub iterations: usize,
    pub trace: Vec<IterationRecord>,
}

/// Run the resonator loop on the selected backend.
pub fn resonator_factor(
    composite: &PhaseSymbol,
    factor_sets: &[Vec<PhaseSymbol>],
    options: &ResonatorOptions,
    backend: &Backend,
) -> Result<ResonatorOutcome> {
    match backend {
        Backend::Phase(ops) => resonate(composite, factor_sets, options, ops),
        Backend::Oscillator(ops) => resonate(composite, factor_sets, options, ops),
    }
}

fn argmax_lowest(weights: &[f64]) -> usize {
    let mut best = 0;
    for (k, &w) in weights.iter().enumerate().skip(1) {
        if w > weights[best] {
            best = k;
        }
    }
    best
}

fn resonate<B: HdOps>(
    composite: &PhaseSymbol,
    factor_sets: &[Vec<PhaseSymbol>],
    options: &ResonatorOptions,
    ops: &B,
) -> Result<ResonatorOutcome> {
    if factor_sets.len() < 2 {
        return Err(HdError::InvalidInput(format!(
            "resonator needs at least two factor sets, got {}",
            factor_sets.len()
        )));
    }
    if factor_sets.iter().any(Vec::is_empty) {
        return Err(HdError::InvalidInput("empty codebook".into()));
    }
    if options.max_iterations == 0 {
        return Err(HdError::InvalidInput("max_iterations must be >= 1".into()));
    }
    let dim = composite.dim();
    for set in factor_sets {
        for sym in set {
            if sym.dim() != dim {
                return Err(HdError::Fhrr(fhrr_core::FhrrError::DimensionMismatch {
                    expected: dim,
                    got: sym.dim(),
                }));
            }
        }
    }

    let f_count = factor_sets.len();
    let composite_enc = ops.encode(composite)?;
    let codebooks: Vec<Vec<B::Sym>> = factor_sets
        .iter()
        .map(|set| set.iter().map(|s| ops.encode(s)).collect())
        .collect::<Result<_>>()?;

    // Starting guesses: every codebook entry superposed, i.e. "it could be
    // any of them, equally".
    let mut guesses: Vec<B::Sym> = match &options.initial_guesses {
        Some(given) => {
            if given.len() != f_count {
                return Err(HdError::InvalidInput(format!(
                    "{} initial guesses for {} factor sets",
                    given.len(),
                    f_count
                )));
            }
            given.iter().map(|s| ops.encode(s)).collect::<Result<_>>()?
        }
        None => codebooks
            .iter()
            .map(|cb| ops.bundle(cb))
            .collect::<Result<_>>()?,
    };

    let mut trace: Vec<IterationRecord> = Vec::new();
    let mut stable_sweeps = 0usize;

    for _ in 0..options.max_iterations {
        // Sequential sweep: factor f's cleanup sees the guesses already
        // refined earlier in this same sweep. That in-place discipline is
        // what makes the loop converge in a handful of sweeps — refreshing
        // all factors from the previous sweep instead measurably stalls on
        // about one instance in seven at desk scale.
        let mut indices = Vec::with_capacity(f_count);
        let mut similarity_rows = Vec::with_capacity(f_count);

        for f in 0..f_count {
            let mut remainder = composite_enc.clone();
            for (g, guess) in guesses.iter().enumerate() {
                if g != f {
                    remainder = ops.unbind(&remainder, guess)?;
                }
            }
            let weights: Vec<f64> = codebooks[f]
                .iter()
                .map(|entry| ops.similarity(&remainder, entry))
                .collect::<Result<_>>()?;
            indices.push(argmax_lowest(&weights));
            guesses[f] = ops.bundle_weighted(&codebooks[f], &weights)?;
            similarity_rows.push(weights);
        }

        let mut reconstruction = guesses[0].clone();
        for guess in &guesses[1..] {
            reconstruction = ops.bind(&reconstruction, guess)?;
        }
        let reconstruction_similarity = ops.similarity(&reconstruction, &composite_enc)?;

        let unchanged = trace
            .last()
            .map(|prev| prev.indices == indices)
            .unwrap_or(false);
        stable_sweeps = if unchanged { stable_sweeps + 1 } else { 0 };

        trace.push(IterationRecord {
            indices,
            reconstruction_similarity,
            codebook_similarities: similarity_rows,
        });

        if options.early_exit && stable_sweeps >= 2 {
            break;
        }
    }

    let last = trace.last().expect("at least one sweep ran");
    Ok(ResonatorOutcome {
        indices: last.indices.clone(),
        iterations: trace.len(),
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use fhrr_core::wrap_phase;

    #[test]
    fn compose_of_one_set_is_the_selected_symbol() {
        let seed = Seed::new(1);
        let set = vec![
            fhrr_core::random_symbol(16, &mut seed.child(0).rng()).unwrap(),
            fhrr_core::random_symbol(16, &mut seed.child(1).rng()).unwrap(),
        ];
        let out = compose(std::slice::from_ref(&set), &[1]).unwrap();
        assert_eq!(out, set[1]);
    }

    #[test]
    fn compose_is_order_invariant_and_invertible() {
        let problem = FactorProblem::random(3, 4, 64, Seed::new(2)).unwrap();
        let fwd = compose(&problem.factor_sets, &problem.truth).unwrap();
        let mut reversed_sets = problem.factor_sets.clone();
        reversed_sets.reverse();
        let mut reversed_idx = problem.truth.clone();
        reversed_idx.reverse();
        let rev = compose(&reversed_sets, &reversed_idx).unwrap();
        for (x, y) in fwd.phases().iter().zip(rev.phases()) {
            assert!(wrap_phase(x - y).abs() < 1e-12);
        }

        // Unbinding the last factor recovers the rest.
        let last = &problem.factor_sets[2][problem.truth[2]];
        let partial = fhrr_core::unbind(&fwd, last).unwrap();
        let expect = compose(&problem.factor_sets[..2], &problem.truth[..2]).unwrap();
        for (x, y) in partial.phases().iter().zip(expect.phases()) {
            assert!(wrap_phase(x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn compose_rejects_bad_indices() {
        let problem = FactorProblem::random(2, 3, 16, Seed::new(3)).unwrap();
        let err = compose(&problem.factor_sets, &[0, 3]).unwrap_err();
        assert_eq!(
            err,
            HdError::IndexOutOfRange {
                factor: 1,
                index: 3,
                size: 3
            }
        );
    }

    #[test]
    fn random_problems_are_self_consistent_and_seeded() {
        let a = FactorProblem::random(3, 5, 32, Seed::new(4)).unwrap();
        let b = FactorProblem::random(3, 5, 32, Seed::new(4)).unwrap();
        assert_eq!(a, b);
        let rebuilt = compose(&a.factor_sets, &a.truth).unwrap();
        assert_eq!(rebuilt, a.composite);
    }

    #[test]
    fn singleton_codebooks_resolve_in_one_sweep() {
        let problem = FactorProblem::random(2, 1, 64, Seed::new(5)).unwrap();
        let out = resonator_factor(
            &problem.composite,
            &problem.factor_sets,
            &ResonatorOptions {
                max_iterations: 1,
                ..Default::default()
            },
            &Backend::phase(),
        )
        .unwrap();
        assert_eq!(out.indices, vec![0, 0]);
        assert_eq!(out.iterations, 1);
        assert!(out.trace[0].reconstruction_similarity > 0.999);
    }

    #[test]
    fn truth_is_a_fixed_point_of_the_sweep() {
        let problem = FactorProblem::random(3, 8, 512, Seed::new(6)).unwrap();
        let init: Vec<PhaseSymbol> = problem
            .truth
            .iter()
            .zip(&problem.factor_sets)
            .map(|(&idx, set)| set[idx].clone())
            .collect();
        let out = resonator_factor(
            &problem.composite,
            &problem.factor_sets,
            &ResonatorOptions {
                max_iterations: 10,
                early_exit: false,
                initial_guesses: Some(init),
            },
            &Backend::phase(),
        )
        .unwrap();
        for record in &out.trace {
            assert_eq!(record.indices, problem.truth, "left the fixed point");
        }
    }

    #[test]
    fn early_exit_matches_the_full_budget_answer() {
        for s in 0..5u64 {
            let problem = FactorProblem::random(3, 6, 512, Seed::new(100 + s)).unwrap();
            let full = resonator_factor(
                &problem.composite,
                &problem.factor_sets,
                &ResonatorOptions {
                    early_exit: false,
                    ..Default::default()
                },
                &Backend::phase(),
            )
            .unwrap();
            let trimmed = resonator_factor(
                &problem.composite,
                &problem.factor_sets,
                &ResonatorOptions::default(),
                &Backend::phase(),
            )
            .unwrap();
            assert_eq!(full.indices, trimmed.indices, "seed {s}");
            assert!(trimmed.iterations <= full.iterations);
            // Early exit requires two stable sweeps, so the prefix traces
            // coincide.
            assert_eq!(
                full.trace[..trimmed.iterations],
                trimmed.trace[..],
                "seed {s}"
            );
        }
    }

    #[test]
    fn small_instances_are_solved_by_the_phase_backend() {
        let mut correct = 0;
        for s in 0..16u64 {
            let problem = FactorProblem::random(3, 8, 512, Seed::new(200 + s)).unwrap();
            let out = resonator_factor(
                &problem.composite,
                &problem.factor_sets,
                &ResonatorOptions::default(),
                &Backend::phase(),
            )
            .unwrap();
            if out.indices == problem.truth {
                correct += 1;
            }
        }
        // Measured on these frozen seeds: 16/16. Kept strict; regressions
        // in bind/bundle/similarity would show up here first.
        assert_eq!(correct, 16, "only {correct}/16 instances solved");
    }

    #[test]
    fn argmax_prefers_the_lowest_index_on_ties() {
        assert_eq!(argmax_lowest(&[0.3, 0.7, 0.7]), 1);
        assert_eq!(argmax_lowest(&[0.7, 0.7, 0.7]), 0);
        assert_eq!(argmax_lowest(&[0.1]), 0);
    }
}
