//! Erdős–Rényi edge-recovery sweep: for each edge probability and trial,
//! generate a graph, compress its edge set into one symbol, score every
//! node pair by decoding, and record the AUROC of those scores against the
//! true edges — per backend, from identical graphs and codebooks.

use fhrr_core::Seed;
use hd_algorithms::{
    auroc, compress_edges, gen_erdos_renyi, mann_whitney_u, pair_scores, predict_edges,
};
use rayon::prelude::*;

use crate::config::GraphConfig;
use crate::csv::{config_hash, fnum, sidecar_path, CsvWriter};
use crate::error::Result;
use crate::runner::{summary_csv, CheckReport, OutputFile, ResultRecord, RunOutput};

struct TrialRow {
    backend: &'static str,
    p_idx: usize,
    trial: u64,
    auroc: f64,
}

pub fn run_graph(cfg: &GraphConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let hash = config_hash(cfg);
    let backends = cfg.backend.instances(&cfg.drive, cfg.chaining);
    let cfg_seed = Seed::new(cfg.seed);

    // Job list in final row order; the parallel map preserves it.
    let mut jobs = Vec::new();
    for backend in &backends {
        for p_idx in 0..cfg.edge_probabilities.len() {
            for trial in 0..cfg.trials {
                jobs.push((backend, p_idx, trial));
            }
        }
    }

    let rows: Vec<Option<TrialRow>> = jobs
        .par_iter()
        .map(|&(backend, p_idx, trial)| -> Result<Option<TrialRow>> {
            // Trial seeds ignore the backend, so both backends see the same
            // graph and the same node codebook.
            let trial_seed = cfg_seed.child(p_idx as u64).child(trial);
            let graph = gen_erdos_renyi(cfg.nodes, cfg.edge_probabilities[p_idx], trial_seed.child(0))?;
            if graph.edge_count() == 0 {
                // Nothing to encode; the draw happened, the row didn't.
                return Ok(None);
            }
            let code = compress_edges(&graph, cfg.dim, trial_seed.child(1), backend)?;
            let matrix = predict_edges(&code, backend)?;
            let (scores, labels): (Vec<f64>, Vec<bool>) = pair_scores(&matrix)
                .into_iter()
                .map(|(i, j, s)| (s, graph.has_edge(i, j)))
                .unzip();
            Ok(Some(TrialRow {
                backend: backend.name(),
                p_idx,
                trial,
                auroc: auroc(&scores, &labels)?,
            }))
        })
        .collect::<Result<_>>()?;
    let rows: Vec<TrialRow> = rows.into_iter().flatten().collect();

    let mut main = CsvWriter::new(&hash, &["backend", "p", "trial", "auroc"]);
    for row in &rows {
        main.row(&[
            row.backend.to_string(),
            fnum(cfg.edge_probabilities[row.p_idx]),
            row.trial.to_string(),
            fnum(row.auroc),
        ]);
    }

    // Per-backend mean AUROC at each p, plus the cross-backend rank test.
    let mut records = Vec::new();
    let mut check = CheckReport::default();
    let mut pooled: Vec<Vec<f64>> = vec![Vec::new(); backends.len()];
    for (bi, backend) in backends.iter().enumerate() {
        let mut means = Vec::with_capacity(cfg.edge_probabilities.len());
        for (p_idx, &p) in cfg.edge_probabilities.iter().enumerate() {
            let vals: Vec<f64> = rows
                .iter()
                .filter(|r| r.backend == backend.name() && r.p_idx == p_idx)
                .map(|r| r.auroc)
                .collect();
            let mean = vals.iter().sum::<f64>() / vals.len().max(1) as f64;
            means.push(mean);
            pooled[bi].extend(vals);
            records.push(ResultRecord {
                experiment: "graph",
                seed: cfg.seed,
                backend: backend.name().to_string(),
                metric: format!("mean_auroc_p{}", fnum(p)),
                value: mean,
            });
        }
        let monotone = means.windows(2).all(|w| w[1] <= w[0] + 1e-12);
        check.push(
            monotone,
            format!(
                "graph[{}]: mean AUROC non-increasing across p ({})",
                backend.name(),
                means.iter().map(|&m| fnum(m)).collect::<Vec<_>>().join(", ")
            ),
        );
        check.push(
            means[0] > cfg.min_low_p_auroc,
            format!(
                "graph[{}]: mean AUROC {} at p={} > {}",
                backend.name(),
                fnum(means[0]),
                fnum(cfg.edge_probabilities[0]),
                fnum(cfg.min_low_p_auroc)
            ),
        );
    }

    let mut files = vec![OutputFile {
        path: cfg.out.clone(),
        bytes: main.into_bytes(),
    }];

    if backends.len() == 2 {
        let mw = mann_whitney_u(&pooled[0], &pooled[1])?;
        for (metric, value) in [("utest_u", mw.u), ("utest_z", mw.z), ("utest_p", mw.p_value)] {
            records.push(ResultRecord {
                experiment: "graph",
                seed: cfg.seed,
                backend: "both".to_string(),
                metric: metric.to_string(),
                value,
            });
        }
        check.push(
            mw.p_value > cfg.utest_alpha,
            format!(
                "graph: backends not distinguishable by rank test (p {} > {})",
                fnum(mw.p_value),
                fnum(cfg.utest_alpha)
            ),
        );
        let mut utest = CsvWriter::new(&hash, &["u", "z", "p_value", "n_phase", "n_oscillator"]);
        utest.row(&[
            fnum(mw.u),
            fnum(mw.z),
            fnum(mw.p_value),
            pooled[0].len().to_string(),
            pooled[1].len().to_string(),
        ]);
        files.push(OutputFile {
            path: sidecar_path(&cfg.out, "utest", "csv"),
            bytes: utest.into_bytes(),
        });
    }

    files.push(OutputFile {
        path: sidecar_path(&cfg.out, "summary", "csv"),
        bytes: summary_csv(&hash, &records),
    });

    Ok(RunOutput { files, check })
}
