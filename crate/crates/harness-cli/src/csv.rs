//! Deterministic CSV assembly.
//!
//! Every output file starts with a comment line carrying the hash of the
//! effective config, so a result file can always be matched back to the
//! exact settings that produced it. Floats are written with Rust's
//! shortest-round-trip formatting: the printed value parses back to the
//! same bits, and identical runs produce identical bytes.

use serde::Serialize;
use sha2::{Digest, Sha256};

/// SHA-256 of the effective config's canonical JSON. Output paths are
/// excluded from serialization, so the hash identifies the computation,
/// not where its results were written.
pub fn config_hash<T: Serialize>(config: &T) -> String {
    let json = serde_json::to_string(config).expect("configs serialize infallibly");
    let digest = Sha256::digest(json.as_bytes());
    let mut hex = String::with_capacity(64);
    for byte in digest {
        hex.push_str(&format!("{byte:02x}"));
    }
    hex
}

/// Shortest-round-trip float formatting shared by every emitter.
pub fn fnum(x: f64) -> String {
    format!("{x}")
}

/// CSV accumulator: hash comment, header row, data rows, LF line endings.
pub struct CsvWriter {
    buf: String,
}

impl CsvWriter {
    pub fn new(config_hash: &str, columns: &[&str]) -> Self {
        let mut buf = String::new();
        buf.push_str("# config_hash=");
        buf.push_str(config_hash);
        buf.push('\n');
        buf.push_str(&columns.join(","));
        buf.push('\n');
        CsvWriter { buf }
    }

    pub fn row(&mut self, cells: &[String]) {
        self.buf.push_str(&cells.join(","));
        self.buf.push('\n');
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.buf.into_bytes()
    }
}

/// Derive a sidecar path from the main output path: `runs/x.csv` with
/// suffix `hist` becomes `runs/x-hist.csv`.
pub fn sidecar_path(out: &str, suffix: &str, ext: &str) -> String {
    let stem = out.strip_suffix(".csv").unwrap_or(out);
    format!("{stem}-{suffix}.{ext}")
}
