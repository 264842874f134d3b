//! Weights file format: a little-endian u32 header length, a JSON header
//! carrying shapes / seed / hyperparameters, then both weight matrices as a
//! flat little-endian f64 payload (layer 1 first, row-major). Bit-exact
//! round trips are part of the contract — reruns must reload *identical*
//! networks.

use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

use crate::matrix::Matrix;
use crate::train::{Hyperparams, LayerShapes};
use crate::{NnError, Result};

const FORMAT_TAG: &str = "hdnn-weights-v1";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    format: String,
    shapes: LayerShapes,
    seed: u64,
    hyperparams: Hyperparams,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightsFile {
    pub shapes: LayerShapes,
    pub seed: u64,
    pub hyperparams: Hyperparams,
    pub w1: Matrix,
    pub w2: Matrix,
}

pub fn save_weights<W: Write>(mut out: W, file: &WeightsFile) -> Result<()> {
    check_shapes(file)?;
    let header = Header {
        format: FORMAT_TAG.into(),
        shapes: file.shapes,
        seed: file.seed,
        hyperparams: file.hyperparams.clone(),
    };
    let header_bytes = serde_json::to_vec(&header)
        .map_err(|e| NnError::MalformedWeights(format!("header encode: {e}")))?;
    let len = u32::try_from(header_bytes.len())
        .map_err(|_| NnError::MalformedWeights("header too large".into()))?;
    out.write_all(&len.to_le_bytes()).map_err(io_err)?;
    out.write_all(&header_bytes).map_err(io_err)?;
    for m in [&file.w1, &file.w2] {
        for v in m.data() {
            out.write_all(&v.to_le_bytes()).map_err(io_err)?;
        }
    }
    Ok(())
}

pub fn load_weights<R: Read>(mut input: R) -> Result<WeightsFile> {
    let mut len_bytes = [0u8; 4];
    input.read_exact(&mut len_bytes).map_err(io_err)?;
    let len = u32::from_le_bytes(len_bytes) as usize;
    let mut header_bytes = vec![0u8; len];
    input.read_exact(&mut header_bytes).map_err(io_err)?;
    let header: Header = serde_json::from_slice(&header_bytes)
        .map_err(|e| NnError::MalformedWeights(format!("header decode: {e}")))?;
    if header.format != FORMAT_TAG {
        return Err(NnError::MalformedWeights(format!(
            "unknown format tag {:?}",
            header.format
        )));
    }
    header.shapes.validate()?;

    let mut read_matrix = |rows: usize, cols: usize| -> Result<Matrix> {
        let mut data = Vec::with_capacity(rows * cols);
        let mut buf = [0u8; 8];
        for _ in 0..rows * cols {
            input.read_exact(&mut buf).map_err(|e| {
                NnError::MalformedWeights(format!("payload truncated: {e}"))
            })?;
            data.push(f64::from_le_bytes(buf));
        }
        Matrix::from_flat(rows, cols, data)
    };
    let w1 = read_matrix(header.shapes.hidden, header.shapes.inputs)?;
    let w2 = read_matrix(header.shapes.classes, header.shapes.hidden)?;

    let file = WeightsFile {
        shapes: header.shapes,
        seed: header.seed,
        hyperparams: header.hyperparams,
        w1,
        w2,
    };
    check_shapes(&file)?;
    Ok(file)
}

fn check_shapes(file: &WeightsFile) -> Result<()> {
    file.shapes.validate()?;
    let ok = file.w1.rows() == file.shapes.hidden
        && file.w1.cols() == file.shapes.inputs
        && file.w2.rows() == file.shapes.classes
        && file.w2.cols() == file.shapes.hidden;
    if !ok {
        return Err(NnError::MalformedWeights(format!(
            "weight shapes {}x{} / {}x{} do not match header {:?}",
            file.w1.rows(),
            file.w1.cols(),
            file.w2.rows(),
            file.w2.cols(),
            file.shapes
        )));
    }
    Ok(())
}

fn io_err(e: std::io::Error) -> NnError {
    NnError::MalformedWeights(e.to_string())
}
