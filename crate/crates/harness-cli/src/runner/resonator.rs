//! Resonator factorization benchmark: many random factorization problems
//! per backend, each run for the full iteration budget so the per-iteration
//! similarity traces can be averaged across trials. Per trial the runner
//! records correctness and the final reconstruction quality; per iteration
//! it records the three convergence traces — similarity of the running
//! reconstruction to the composite, of the cleanup inputs to the true
//! factors, and of the cleanup inputs to everything else in the codebooks.

use fhrr_core::Seed;
use hd_algorithms::{resonator_factor, Backend, FactorProblem, ResonatorOptions};
use rayon::prelude::*;

use crate::config::ResonatorConfig;
use crate::csv::{config_hash, fnum, sidecar_path, CsvWriter};
use crate::error::Result;
use crate::runner::{summary_csv, CheckReport, OutputFile, ResultRecord, RunOutput};

struct TrialResult {
    correct: bool,
    iterations: usize,
    final_reconstruction: f64,
    /// Per iteration: (reconstruction, mean true-factor similarity,
    /// mean |non-factor similarity|).
    trace: Vec<(f64, f64, f64)>,
}

fn run_trial(cfg: &ResonatorConfig, backend: &Backend, trial: u64) -> Result<TrialResult> {
    let seed = Seed::new(cfg.seed).child(trial);
    let problem = FactorProblem::random(cfg.factors, cfg.codebook_size, cfg.dim, seed)?;
    let options = ResonatorOptions {
        max_iterations: cfg.iterations,
        early_exit: false,
        initial_guesses: None,
    };
    let outcome = resonator_factor(&problem.composite, &problem.factor_sets, &options, backend)?;

    let trace = outcome
        .trace
        .iter()
        .map(|rec| {
            let mut factor_sum = 0.0;
            let mut nonfactor_sum = 0.0;
            let mut nonfactor_n = 0usize;
            for (f, sims) in rec.codebook_similarities.iter().enumerate() {
                for (k, &s) in sims.iter().enumerate() {
                    if k == problem.truth[f] {
                        factor_sum += s;
                    } else {
                        nonfactor_sum += s.abs();
                        nonfactor_n += 1;
                    }
                }
            }
            (
                rec.reconstruction_similarity,
                factor_sum / cfg.factors as f64,
                nonfactor_sum / nonfactor_n.max(1) as f64,
            )
        })
        .collect::<Vec<_>>();

    Ok(TrialResult {
        correct: outcome.indices == problem.truth,
        iterations: outcome.iterations,
        final_reconstruction: outcome
            .trace
            .last()
            .map(|r| r.reconstruction_similarity)
            .unwrap_or(f64::NAN),
        trace,
    })
}

pub fn run_resonator(cfg: &ResonatorConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let hash = config_hash(cfg);
    let backends = cfg.backend.instances(&cfg.drive, cfg.chaining);

    let mut main = CsvWriter::new(
        &hash,
        &["backend", "trial", "correct", "iterations", "final_reconstruction"],
    );
    let mut trace_csv = CsvWriter::new(
        &hash,
        &["backend", "iteration", "reconstruction", "factor", "nonfactor_abs"],
    );
    let mut records = Vec::new();
    let mut check = CheckReport::default();
    let mut fractions = Vec::new();

    for backend in &backends {
        let results: Vec<TrialResult> = (0..cfg.trials)
            .into_par_iter()
            .map(|trial| run_trial(cfg, backend, trial))
            .collect::<Result<_>>()?;

        for (trial, r) in results.iter().enumerate() {
            main.row(&[
                backend.name().to_string(),
                trial.to_string(),
                (r.correct as u8).to_string(),
                r.iterations.to_string(),
                fnum(r.final_reconstruction),
            ]);
        }

        // Every trial ran the full budget, so the traces zip cleanly.
        let n = results.len() as f64;
        let mut mean_trace = vec![(0.0, 0.0, 0.0); cfg.iterations];
        for r in &results {
            for (acc, &(rec, fac, non)) in mean_trace.iter_mut().zip(&r.trace) {
                acc.0 += rec / n;
                acc.1 += fac / n;
                acc.2 += non / n;
            }
        }
        for (i, &(rec, fac, non)) in mean_trace.iter().enumerate() {
            trace_csv.row(&[
                backend.name().to_string(),
                (i + 1).to_string(),
                fnum(rec),
                fnum(fac),
                fnum(non),
            ]);
        }

        let fraction = results.iter().filter(|r| r.correct).count() as f64 / n;
        let final_recon = mean_trace.last().map(|t| t.0).unwrap_or(f64::NAN);
        let worst_nonfactor = mean_trace.iter().map(|t| t.2).fold(0.0f64, f64::max);
        fractions.push(fraction);

        for (metric, value) in [
            ("fraction_correct", fraction),
            ("mean_final_reconstruction", final_recon),
            ("worst_mean_nonfactor_abs", worst_nonfactor),
        ] {
            records.push(ResultRecord {
                experiment: "resonator",
                seed: cfg.seed,
                backend: backend.name().to_string(),
                metric: metric.to_string(),
                value,
            });
        }

        if backend.name() == "phase" {
            check.push(
                fraction >= cfg.min_correct,
                format!(
                    "resonator[phase]: fraction correct {} >= {}",
                    fnum(fraction),
                    fnum(cfg.min_correct)
                ),
            );
        }
        check.push(
            final_recon > cfg.min_final_reconstruction,
            format!(
                "resonator[{}]: mean reconstruction {} at iteration {} > {}",
                backend.name(),
                fnum(final_recon),
                cfg.iterations,
                fnum(cfg.min_final_reconstruction)
            ),
        );
        check.push(
            worst_nonfactor < cfg.max_nonfactor,
            format!(
                "resonator[{}]: mean |non-factor similarity| stays at {} < {}",
                backend.name(),
                fnum(worst_nonfactor),
                fnum(cfg.max_nonfactor)
            ),
        );
    }

    if fractions.len() == 2 {
        let gap = (fractions[0] - fractions[1]).abs();
        check.push(
            gap <= cfg.max_backend_gap,
            format!(
                "resonator: backend correctness gap {} <= {}",
                fnum(gap),
                fnum(cfg.max_backend_gap)
            ),
        );
    }

    Ok(RunOutput {
        files: vec![
            OutputFile {
                path: cfg.out.clone(),
                bytes: main.into_bytes(),
            },
            OutputFile {
                path: sidecar_path(&cfg.out, "trace", "csv"),
                bytes: trace_csv.into_bytes(),
            },
            OutputFile {
                path: sidecar_path(&cfg.out, "summary", "csv"),
                bytes: summary_csv(&hash, &records),
            },
        ],
        check,
    })
}
