//! Rank statistics used to score and compare experiment outcomes. All three
//! are small enough that exact (or standard-approximation) implementations
//! beat pulling in a stats stack.

use crate::{HdError, Result};

/// Midpoint ranks (1-based) with ties sharing their average rank.
fn mid_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).expect("finite values"));
    let mut ranks = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        // Items i..=j (0-based sorted positions) tie; ranks are 1-based.
        let shared = (i + j + 2) as f64 / 2.0;
        for &idx in &order[i..=j] {
            ranks[idx] = shared;
        }
        i = j + 1;
    }
    ranks
}

fn check_finite(values: &[f64], what: &str) -> Result<()> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(HdError::InvalidInput(format!(
            "{what} contains a non-finite value"
        )));
    }
    Ok(())
}

/// Exact rank-based AUROC: the probability that a random positive outscores
/// a random negative, ties counting one half. Equivalent to the normalized
/// Mann–Whitney statistic.
pub fn auroc(scores: &[f64], labels: &[bool]) -> Result<f64> {
    if scores.len() != labels.len() {
        return Err(HdError::InvalidInput(format!(
            "{} scores vs {} labels",
            scores.len(),
            labels.len()
        )));
    }
    check_finite(scores, "scores")?;
    let n_pos = labels.iter().filter(|&&l| l).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(HdError::InvalidInput(
            "AUROC needs both classes present".into(),
        ));
    }
    let ranks = mid_ranks(scores);
    let rank_sum_pos: f64 = ranks
        .iter()
        .zip(labels)
        .filter(|(_, &l)| l)
        .map(|(r, _)| r)
        .sum();
    let u = rank_sum_pos - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Ok(u / (n_pos as f64 * n_neg as f64))
}

/// Two-sided Mann–Whitney U result (normal approximation with tie
/// correction and continuity correction — fine for the group sizes the
/// harness produces).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MannWhitney {
    /// U statistic for the first sample.
    pub u: f64,
    /// Standardized statistic after continuity correction.
    pub z: f64,
    /// Two-sided p-value.
    pub p_value: f64,
}

pub fn mann_whitney_u(xs: &[f64], ys: &[f64]) -> Result<MannWhitney> {
    if xs.is_empty() || ys.is_empty() {
        return Err(HdError::InvalidInput(
            "Mann-Whitney needs both samples non-empty".into(),
        ));
    }
    check_finite(xs, "first sample")?;
    check_finite(ys, "second sample")?;

    let nx = xs.len() as f64;
    let ny = ys.len() as f64;
    let mut all: Vec<f64> = Vec::with_capacity(xs.len() + ys.len());
    all.extend_from_slice(xs);
    all.extend_from_slice(ys);
    let ranks = mid_ranks(&all);
    let rank_sum_x: f64 = ranks[..xs.len()].iter().sum();
    let u = rank_sum_x - nx * (nx + 1.0) / 2.0;

    let n = nx + ny;
    let mean = nx * ny / 2.0;
    // Tie correction: subtract sum(t^3 - t) over tie groups from the
    // variance's (n^3 - n) term.
    let mut sorted = all;
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        i = j + 1;
    }
    let variance = nx * ny / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if variance <= 0.0 {
        // Every observation identical: no evidence of any difference.
        return Ok(MannWhitney {
            u,
            z: 0.0,
            p_value: 1.0,
        });
    }
    let diff = u - mean;
    let corrected = diff.abs() - 0.5;
    let z = if corrected <= 0.0 {
        0.0
    } else {
        corrected.copysign(diff) / variance.sqrt()
    };
    let p_value = libm::erfc(z.abs() / std::f64::consts::SQRT_2);
    Ok(MannWhitney { u, z, p_value })
}

/// Exact two-sided sign test on signed differences. Zeros are discarded;
/// with no non-zero differences the test is vacuous (p = 1).
pub fn sign_test(diffs: &[f64]) -> Result<f64> {
    check_finite(diffs, "differences")?;
    let pos = diffs.iter().filter(|&&d| d > 0.0).count();
    let neg = diffs.iter().filter(|&&d| d < 0.0).count();
    Ok(sign_test_counts(pos, neg))
}

/// Exact two-sided sign test given the positive/negative counts directly:
/// doubled lower binomial(n, 1/2) tail, capped at 1.
pub fn sign_test_counts(pos: usize, neg: usize) -> f64 {
    let n = pos + neg;
    if n == 0 {
        return 1.0;
    }
    let k = pos.min(neg);
    // Sum C(n, i) / 2^n for i <= k in log space; n stays in the hundreds
    // for our uses so this is both exact enough and cheap.
    let ln_half_n = n as f64 * (0.5f64).ln();
    let mut tail = 0.0f64;
    for i in 0..=k {
        let ln_c = libm::lgamma((n + 1) as f64)
            - libm::lgamma((i + 1) as f64)
            - libm::lgamma((n - i + 1) as f64);
        tail += (ln_c + ln_half_n).exp();
    }
    (2.0 * tail).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn auroc_hand_counts() {
        // One positive above two negatives: every positive-negative pair is
        // correctly ordered.
        let a = auroc(&[0.9, 0.8, 0.3], &[true, false, false]).unwrap();
        assert_eq!(a, 1.0);
        // Reversed labels: always wrong.
        let b = auroc(&[0.9, 0.8, 0.3], &[false, true, true]).unwrap();
        assert_eq!(b, 0.0);
        // A tie counts half.
        let c = auroc(&[0.5, 0.5], &[true, false]).unwrap();
        assert!((c - 0.5).abs() < 1e-15);
    }

    #[test]
    fn auroc_rejects_degenerate_inputs() {
        assert!(auroc(&[0.1, 0.2], &[true, true]).is_err());
        assert!(auroc(&[0.1], &[true, false]).is_err());
        assert!(auroc(&[f64::NAN, 0.2], &[true, false]).is_err());
    }

    #[test]
    fn auroc_is_chance_for_label_independent_scores() {
        // Deterministic interleaving: scores strictly increasing, labels
        // alternating, so each positive beats exactly half the negatives
        // (up to edge effects).
        let scores: Vec<f64> = (0..200).map(|i| i as f64).collect();
        let labels: Vec<bool> = (0..200).map(|i| i % 2 == 0).collect();
        let a = auroc(&scores, &labels).unwrap();
        assert!((a - 0.5).abs() < 0.01, "AUROC {a}");
    }

    #[test]
    fn mann_whitney_total_separation_has_maximal_u() {
        let mw = mann_whitney_u(&[3.0, 4.0], &[1.0, 2.0]).unwrap();
        assert_eq!(mw.u, 4.0); // n_x * n_y
        let rev = mann_whitney_u(&[1.0, 2.0], &[3.0, 4.0]).unwrap();
        assert_eq!(rev.u, 0.0);
        // Symmetric p-values either way around.
        assert!((mw.p_value - rev.p_value).abs() < 1e-12);
    }

    #[test]
    fn mann_whitney_on_identical_samples_is_vacuous() {
        let mw = mann_whitney_u(&[1.0, 1.0, 1.0], &[1.0, 1.0]).unwrap();
        assert_eq!(mw.p_value, 1.0);
        assert_eq!(mw.z, 0.0);
    }

    #[test]
    fn mann_whitney_separates_shifted_samples() {
        let xs: Vec<f64> = (0..50).map(|i| i as f64 / 50.0).collect();
        let ys: Vec<f64> = (0..50).map(|i| 0.8 + i as f64 / 50.0).collect();
        let mw = mann_whitney_u(&xs, &ys).unwrap();
        assert!(mw.p_value < 1e-6, "p = {}", mw.p_value);
        // Same data, no shift: comfortably indistinguishable.
        let same = mann_whitney_u(&xs, &xs.clone()).unwrap();
        assert!(same.p_value > 0.9, "p = {}", same.p_value);
    }

    #[test]
    fn sign_test_exact_values() {
        // 10 positives, 0 negatives: p = 2 * (1/2)^10 exactly.
        let p = sign_test_counts(10, 0);
        assert!((p - 2.0f64 * 0.5f64.powi(10)).abs() < 1e-12);
        // Balanced: capped at 1.
        assert_eq!(sign_test_counts(5, 5), 1.0);
        // Vacuous.
        assert_eq!(sign_test_counts(0, 0), 1.0);
        // 7 vs 3: doubled tail = 2 * (C(10,0)+C(10,1)+C(10,2)+C(10,3)) / 2^10.
        let expect = 2.0 * (1.0 + 10.0 + 45.0 + 120.0) / 1024.0;
        assert!((sign_test_counts(7, 3) - expect).abs() < 1e-12);
    }

    #[test]
    fn sign_test_drops_zeros() {
        let p = sign_test(&[0.0, 0.0, 1.0, -1.0]).unwrap();
        assert_eq!(p, 1.0);
        assert!(sign_test(&[f64::INFINITY]).is_err());
    }
}
