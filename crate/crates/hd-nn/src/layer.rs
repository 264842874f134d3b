//! Phase-domain network layers.
//!
//! A layer is a weighted bundle per output row: the input phases become unit
//! phasors, each output row takes a real-weighted complex sum of them, and
//! the output phase is the argument of that sum. Stacking two layers gives
//! the usual MLP shape. Everything here is the "conventional" execution —
//! floating-point phases in, floating-point phases out; the oscillator
//! execution of the same weights lives in [`crate::infer`].

use fhrr_core::{similarity, PhaseSymbol, EPS_MAG};
use num_complex::Complex64;

use crate::matrix::Matrix;
use crate::{NnError, Result};

/// One layer's forward pass with the intermediates the backward pass needs:
/// the raw complex row sums (for the arg-gradient) and the decoded phases.
pub(crate) struct LayerTrace {
    pub sums: Vec<Complex64>,
    pub output: PhaseSymbol,
}

pub(crate) fn layer_forward(x: &PhaseSymbol, w: &Matrix) -> Result<LayerTrace> {
    if x.dim() != w.cols() {
        return Err(NnError::ShapeMismatch(format!(
            "input has {} phases but the weight matrix has {} columns",
            x.dim(),
            w.cols()
        )));
    }
    let phasors: Vec<Complex64> = x
        .phases()
        .iter()
        .map(|&p| Complex64::from_polar(1.0, p))
        .collect();

    let mut sums = Vec::with_capacity(w.rows());
    let mut phases = Vec::with_capacity(w.rows());
    for r in 0..w.rows() {
        let mut s = Complex64::default();
        for (wk, zk) in w.row(r).iter().zip(&phasors) {
            s += wk * zk;
        }
        if s.norm() < EPS_MAG {
            return Err(NnError::DegenerateRow {
                row: r,
                magnitude: s.norm(),
            });
        }
        sums.push(s);
        phases.push(s.arg());
    }
    Ok(LayerTrace {
        sums,
        output: PhaseSymbol::new(phases)?,
    })
}

/// Single layer: output phase `j` is `arg(sum_k W[j][k] * e^(i x_k))`.
pub fn hd_layer(x: &PhaseSymbol, w: &Matrix) -> Result<PhaseSymbol> {
    layer_forward(x, w).map(|t| t.output)
}

/// Two stacked layers, input -> hidden -> class logit phases.
pub fn hd_mlp(x: &PhaseSymbol, w1: &Matrix, w2: &Matrix) -> Result<PhaseSymbol> {
    hd_layer(&hd_layer(x, w1)?, w2)
}

/// Classification target: phase pi/2 at the true class index, 0 elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureTarget {
    phases: PhaseSymbol,
    class: usize,
}

impl QuadratureTarget {
    pub fn phases(&self) -> &PhaseSymbol {
        &self.phases
    }

    pub fn class(&self) -> usize {
        self.class
    }
}

pub fn quadrature_target(class: usize, n_classes: usize) -> Result<QuadratureTarget> {
    if class >= n_classes {
        return Err(NnError::InvalidInput(format!(
            "class {class} out of range for {n_classes} classes"
        )));
    }
    let mut phases = vec![0.0; n_classes];
    phases[class] = std::f64::consts::FRAC_PI_2;
    Ok(QuadratureTarget {
        phases: PhaseSymbol::new(phases)?,
        class,
    })
}

/// `1 - similarity(output, target)`, in `[0, 2]`.
pub fn loss(output: &PhaseSymbol, target: &QuadratureTarget) -> Result<f64> {
    Ok(1.0 - similarity(output, target.phases())?.value())
}

/// Argmax over classes of similarity to each quadrature target; ties go to
/// the lowest index.
pub fn predict_class(output: &PhaseSymbol) -> Result<usize> {
    let n_classes = output.dim();
    let mut best = 0;
    let mut best_sim = f64::NEG_INFINITY;
    for c in 0..n_classes {
        let target = quadrature_target(c, n_classes)?;
        let s = similarity(output, target.phases())?.value();
        if s > best_sim {
            best_sim = s;
            best = c;
        }
    }
    Ok(best)
}
