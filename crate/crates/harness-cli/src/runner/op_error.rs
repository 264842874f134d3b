//! Operation error sweep: drive two oscillator banks with every pair of
//! phases on a G×G grid over [0, 2π)², apply one operation in the state
//! domain, and compare against the closed-form phase-domain result at each
//! settling period.
//!
//! The second operand's grid is offset by half a cell, so no pair ever sits
//! exactly π apart — the one spot where bundling two inputs is genuinely
//! undefined (the phasor sum cancels) and both backends would be comparing
//! noise against noise.

use std::f64::consts::TAU;

use fhrr_core::{bind, bundle, wrap_phase, PhaseSymbol};
use hd_algorithms::sign_test;
use osc_backend::{
    decode_phase, encode_spikes, integrate_at, osc_bind, osc_bundle, osc_similarity_elements,
    settle_horizon, OscillatorBank, OscillatorParams, ReferenceOscillator,
};

use crate::config::{OpErrorConfig, OpKind};
use crate::csv::{config_hash, fnum, sidecar_path, CsvWriter};
use crate::error::Result;
use crate::runner::{quantile, summary_csv, OutputFile, ResultRecord, RunOutput};

/// Drive a symbol's spike train into a resting bank and record the state at
/// every whole period up to the settle horizon.
fn settle_series(
    symbol: &PhaseSymbol,
    params: &OscillatorParams,
    drive: &osc_backend::SpikeDriveConfig,
    samples: &[f64],
) -> Result<Vec<OscillatorBank>> {
    let mut train = encode_spikes(symbol, params, drive.settle_periods)?;
    if drive.drive_weight != 1.0 {
        train.scale_weights(drive.drive_weight);
    }
    let rest = OscillatorBank::at_rest(symbol.dim(), params.clone())?;
    Ok(integrate_at(&rest, &train, samples)?)
}

pub fn run_op_error(cfg: &OpErrorConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let hash = config_hash(cfg);
    let params = OscillatorParams::default();

    let g = cfg.grid;
    let mut alphas = Vec::with_capacity(g * g);
    let mut betas = Vec::with_capacity(g * g);
    for i in 0..g {
        for j in 0..g {
            alphas.push(TAU * i as f64 / g as f64);
            betas.push(TAU * (j as f64 + 0.5) / g as f64);
        }
    }
    let a_sym = PhaseSymbol::new(alphas)?;
    let b_sym = PhaseSymbol::new(betas)?;

    // The exact result each oscillator readout is measured against.
    let expected: Vec<f64> = match cfg.op {
        OpKind::Similarity => a_sym
            .phases()
            .iter()
            .zip(b_sym.phases())
            .map(|(&a, &b)| (a - b).cos())
            .collect(),
        OpKind::Bundle => bundle(&[a_sym.clone(), b_sym.clone()])?.phases().to_vec(),
        OpKind::Bind => bind(&a_sym, &b_sym)?.phases().to_vec(),
    };

    let periods = cfg.drive.settle_periods;
    let samples: Vec<f64> = (1..=periods)
        .map(|p| settle_horizon(&params, p))
        .collect();
    let banks_a = settle_series(&a_sym, &params, &cfg.drive, &samples)?;
    let banks_b = settle_series(&b_sym, &params, &cfg.drive, &samples)?;

    let mut main = CsvWriter::new(
        &hash,
        &[
            "op", "t", "mean_abs_error", "q05", "q25", "median", "q75", "q95", "sign_p",
        ],
    );
    let mut final_errors = Vec::new();
    let mut final_mean_abs = f64::NAN;
    let mut final_sign_p = f64::NAN;

    for (si, &t) in samples.iter().enumerate() {
        let reference = ReferenceOscillator::analytic(&params, t)?;
        let errors: Vec<f64> = match cfg.op {
            OpKind::Similarity => osc_similarity_elements(&banks_a[si], &banks_b[si])?
                .iter()
                .zip(&expected)
                .map(|(v, e)| v - e)
                .collect(),
            OpKind::Bundle => {
                let out = osc_bundle(&[banks_a[si].clone(), banks_b[si].clone()])?;
                decode_phase(&out, &reference)?
                    .phases()
                    .iter()
                    .zip(&expected)
                    .map(|(d, e)| wrap_phase(d - e))
                    .collect()
            }
            OpKind::Bind => {
                let out = osc_bind(&banks_a[si], &banks_b[si], &reference)?;
                decode_phase(&out, &reference)?
                    .phases()
                    .iter()
                    .zip(&expected)
                    .map(|(d, e)| wrap_phase(d - e))
                    .collect()
            }
        };

        let mean_abs = errors.iter().map(|e| e.abs()).sum::<f64>() / errors.len() as f64;
        let sign_p = sign_test(&errors)?;
        let mut sorted = errors.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite errors"));
        main.row(&[
            cfg.op.name().to_string(),
            fnum(t),
            fnum(mean_abs),
            fnum(quantile(&sorted, 0.05)),
            fnum(quantile(&sorted, 0.25)),
            fnum(quantile(&sorted, 0.50)),
            fnum(quantile(&sorted, 0.75)),
            fnum(quantile(&sorted, 0.95)),
            fnum(sign_p),
        ]);

        if si + 1 == samples.len() {
            final_errors = errors;
            final_mean_abs = mean_abs;
            final_sign_p = sign_p;
        }
    }

    // Final-period error histogram over a symmetric range, so "narrow and
    // centered on zero" is visible at a glance.
    let radius = final_errors
        .iter()
        .fold(0.0f64, |m, e| m.max(e.abs()))
        .max(f64::MIN_POSITIVE);
    let mut counts = vec![0usize; cfg.bins];
    for &e in &final_errors {
        let idx = ((e + radius) / (2.0 * radius) * cfg.bins as f64) as usize;
        counts[idx.min(cfg.bins - 1)] += 1;
    }
    let mut hist = CsvWriter::new(&hash, &["op", "bin_lo", "bin_hi", "count"]);
    for (i, &count) in counts.iter().enumerate() {
        let lo = -radius + 2.0 * radius * i as f64 / cfg.bins as f64;
        let hi = -radius + 2.0 * radius * (i + 1) as f64 / cfg.bins as f64;
        hist.row(&[
            cfg.op.name().to_string(),
            fnum(lo),
            fnum(hi),
            count.to_string(),
        ]);
    }

    let tolerance = cfg.resolved_tolerance();
    let records = vec![
        record(cfg.op, "final_mean_abs_error", final_mean_abs),
        record(cfg.op, "final_sign_p", final_sign_p),
        record(cfg.op, "tolerance", tolerance),
    ];

    let mut check = crate::runner::CheckReport::default();
    check.push(
        final_mean_abs <= tolerance,
        format!(
            "op-error[{}]: final mean |error| {} <= tolerance {}",
            cfg.op.name(),
            fnum(final_mean_abs),
            fnum(tolerance)
        ),
    );
    check.push(
        final_sign_p > cfg.sign_alpha,
        format!(
            "op-error[{}]: final sign-test p {} > {}",
            cfg.op.name(),
            fnum(final_sign_p),
            fnum(cfg.sign_alpha)
        ),
    );

    Ok(RunOutput {
        files: vec![
            OutputFile {
                path: cfg.out.clone(),
                bytes: main.into_bytes(),
            },
            OutputFile {
                path: sidecar_path(&cfg.out, "hist", "csv"),
                bytes: hist.into_bytes(),
            },
            OutputFile {
                path: sidecar_path(&cfg.out, "summary", "csv"),
                bytes: summary_csv(&hash, &records),
            },
        ],
        check,
    })
}

fn record(op: OpKind, metric: &str, value: f64) -> ResultRecord {
    ResultRecord {
        experiment: "op-error",
        seed: 0,
        backend: format!("oscillator-vs-phase[{}]", op.name()),
        metric: metric.to_string(),
        value,
    }
}
