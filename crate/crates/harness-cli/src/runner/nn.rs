//! Phase-network training benchmark on the synthetic angle task: several
//! independent trials (fresh data and fresh weights per seed child), each
//! trained with full-batch gradient descent and then evaluated with exact
//! phase inference and with the oscillator substrate. The first trial's
//! weights are written out in the binary weight format so a trained network
//! can be reloaded without retraining.

use fhrr_core::{PhaseSymbol, Seed};
use hd_nn::{
    backend_agreement, evaluate, evaluate_osc, save_weights, synthetic_split, train, OscInference,
    TrainedNetwork, WeightsFile,
};
use osc_backend::OscillatorParams;
use rayon::prelude::*;

use crate::config::NnConfig;
use crate::csv::{config_hash, fnum, sidecar_path, CsvWriter};
use crate::error::{HarnessError, Result};
use crate::runner::{summary_csv, CheckReport, OutputFile, ResultRecord, RunOutput};

struct TrialResult {
    network: TrainedNetwork,
    train_accuracy: f64,
    test_phase: f64,
    test_osc: f64,
    agreement: f64,
}

fn run_trial(cfg: &NnConfig, trial: u64) -> Result<TrialResult> {
    let seed = Seed::new(cfg.seed).child(trial);
    let (train_set, test_set) = synthetic_split(&cfg.task, seed.child(0))?;
    let network = train(&train_set, &cfg.shapes(), &cfg.hyper, seed.child(1))?;

    let train_accuracy = evaluate(&train_set, &network.w1, &network.w2)?;
    let test_phase = evaluate(&test_set, &network.w1, &network.w2)?;
    let inference = OscInference {
        params: OscillatorParams::default(),
        drive: cfg.drive.clone(),
        chaining: cfg.chaining,
    };
    let test_osc = evaluate_osc(&test_set, &network.w1, &network.w2, &inference)?;
    let inputs: Vec<PhaseSymbol> = test_set.iter().map(|(x, _)| x.clone()).collect();
    let agreement = backend_agreement(&inputs, &network.w1, &network.w2, &inference)?;

    Ok(TrialResult {
        network,
        train_accuracy,
        test_phase,
        test_osc,
        agreement,
    })
}

pub fn run_nn(cfg: &NnConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let hash = config_hash(cfg);

    let results: Vec<TrialResult> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| run_trial(cfg, trial))
        .collect::<Result<_>>()?;

    let mut main = CsvWriter::new(
        &hash,
        &["trial", "epoch", "mean_loss", "train_accuracy", "skipped"],
    );
    let mut eval = CsvWriter::new(
        &hash,
        &[
            "trial",
            "train_accuracy",
            "test_accuracy_phase",
            "test_accuracy_oscillator",
            "agreement",
        ],
    );
    for (trial, r) in results.iter().enumerate() {
        for e in &r.network.curve {
            main.row(&[
                trial.to_string(),
                e.epoch.to_string(),
                fnum(e.mean_loss),
                fnum(e.train_accuracy),
                e.skipped.to_string(),
            ]);
        }
        eval.row(&[
            trial.to_string(),
            fnum(r.train_accuracy),
            fnum(r.test_phase),
            fnum(r.test_osc),
            fnum(r.agreement),
        ]);
    }

    // One reloadable artifact: the first trial's trained weights.
    let first = &results[0];
    let weights = WeightsFile {
        shapes: cfg.shapes(),
        seed: cfg.seed,
        hyperparams: cfg.hyper.clone(),
        w1: first.network.w1.clone(),
        w2: first.network.w2.clone(),
    };
    let mut weight_bytes = Vec::new();
    save_weights(&mut weight_bytes, &weights)
        .map_err(|e| HarnessError::Run(format!("weight serialization failed: {e}")))?;

    let n = results.len() as f64;
    let passing = results
        .iter()
        .filter(|r| r.train_accuracy >= cfg.min_train_accuracy && r.test_phase >= cfg.min_test_accuracy)
        .count() as f64
        / n;
    let mean = |f: fn(&TrialResult) -> f64| results.iter().map(f).sum::<f64>() / n;
    let mean_agreement = mean(|r| r.agreement);

    let mut records = Vec::new();
    for (metric, value) in [
        ("fraction_passing", passing),
        ("mean_train_accuracy", mean(|r| r.train_accuracy)),
        ("mean_test_accuracy_phase", mean(|r| r.test_phase)),
        ("mean_test_accuracy_oscillator", mean(|r| r.test_osc)),
        ("mean_agreement", mean_agreement),
    ] {
        records.push(ResultRecord {
            experiment: "nn",
            seed: cfg.seed,
            backend: "both".to_string(),
            metric: metric.to_string(),
            value,
        });
    }

    let mut check = CheckReport::default();
    check.push(
        passing >= cfg.min_seed_fraction,
        format!(
            "nn: fraction of trials with train >= {} and test >= {}: {} >= {}",
            fnum(cfg.min_train_accuracy),
            fnum(cfg.min_test_accuracy),
            fnum(passing),
            fnum(cfg.min_seed_fraction)
        ),
    );
    check.push(
        mean_agreement >= cfg.min_agreement,
        format!(
            "nn: mean backend class agreement {} >= {}",
            fnum(mean_agreement),
            fnum(cfg.min_agreement)
        ),
    );

    Ok(RunOutput {
        files: vec![
            OutputFile {
                path: cfg.out.clone(),
                bytes: main.into_bytes(),
            },
            OutputFile {
                path: sidecar_path(&cfg.out, "eval", "csv"),
                bytes: eval.into_bytes(),
            },
            OutputFile {
                path: sidecar_path(&cfg.out, "weights", "bin"),
                bytes: weight_bytes,
            },
            OutputFile {
                path: sidecar_path(&cfg.out, "summary", "csv"),
                bytes: summary_csv(&hash, &records),
            },
        ],
        check,
    })
}
