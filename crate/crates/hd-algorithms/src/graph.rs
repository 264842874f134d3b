//! Random-graph generation and holographic edge compression.
//!
//! A whole edge list collapses into a single symbol: bind the two endpoint
//! symbols of every edge, bundle the results. Reconstruction asks, for each
//! node i, "what was i bound to?": unbind node i from the compressed symbol
//! and score every node against the answer. Real neighbors stand out of the
//! quasi-orthogonal noise floor.

use std::collections::BTreeSet;

use fhrr_core::{random_symbol, PhaseSymbol, Seed};
use rand::Rng;

use crate::backend::{Backend, HdOps};
use crate::{HdError, Result};

/// Undirected graph, no self-loops, each edge stored once as `(lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n_nodes: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new(n_nodes: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if n_nodes < 2 {
            return Err(HdError::InvalidInput(format!(
                "graph needs at least 2 nodes, got {n_nodes}"
            )));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(HdError::InvalidInput(format!("self-loop on node {a}")));
            }
            if a >= n_nodes || b >= n_nodes {
                return Err(HdError::InvalidInput(format!(
                    "edge ({a}, {b}) outside 0..{n_nodes}"
                )));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Self {
            n_nodes,
            edges: set,
        })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }
}

/// Erdős–Rényi G(n, p): every unordered pair tossed independently.
/// Deterministic per seed — pairs are visited in lexicographic order off a
/// single seeded stream.
pub fn gen_erdos_renyi(n: usize, p: f64, seed: Seed) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(HdError::InvalidInput(format!(
            "edge probability must be in [0, 1], got {p}"
        )));
    }
    if n < 2 {
        return Err(HdError::InvalidInput(format!(
            "graph needs at least 2 nodes, got {n}"
        )));
    }
    let mut rng = seed.rng();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen::<f64>() < p {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, edges)
}

/// A graph folded into symbols: one random symbol per node plus the single
/// bundled edge symbol. The code itself is representation-neutral; the
/// backend only decides how the fold was computed.
#[derive(Debug, Clone, PartialEq)]
pub struct HdGraphCode {
    pub node_symbols: Vec<PhaseSymbol>,
    pub edge_symbol: PhaseSymbol,
}

/// Compress a graph's edge list into one symbol using the selected backend.
/// Node symbols are drawn per-node from children of `seed`, so the two
/// backends see identical codebooks for the same seed.
pub fn compress_edges(
    graph: &Graph,
    dim: usize,
    seed: Seed,
    backend: &Backend,
) -> Result<HdGraphCode> {
    if graph.edge_count() == 0 {
        return Err(HdError::InvalidInput(
            "cannot compress a graph with no edges (empty bundle)".into(),
        ));
    }
    if dim < 64 {
        return Err(HdError::InvalidInput(format!(
            "dimension {dim} too small for node symbols to be quasi-orthogonal (need >= 64)"
        )));
    }
    let node_symbols: Vec<PhaseSymbol> = (0..graph.n_nodes())
        .map(|i| random_symbol(dim, &mut seed.child(i as u64).rng()))
        .collect::<fhrr_core::Result<_>>()?;

    let edge_symbol = match backend {
        Backend::Phase(ops) => fold_edges(graph, &node_symbols, ops),
        Backend::Oscillator(ops) => fold_edges(graph, &node_symbols, ops),
    }?;

    Ok(HdGraphCode {
        node_symbols,
        edge_symbol,
    })
}

fn fold_edges<B: HdOps>(
    graph: &Graph,
    node_symbols: &[PhaseSymbol],
    ops: &B,
) -> Result<PhaseSymbol> {
    let nodes: Vec<B::Sym> = node_symbols
        .iter()
        .map(|s| ops.encode(s))
        .collect::<Result<_>>()?;
    let edge_syms: Vec<B::Sym> = graph
        .edges()
        .map(|(i, j)| ops.bind(&nodes[i], &nodes[j]))
        .collect::<Result<_>>()?;
    ops.decode(&ops.bundle(&edge_syms)?)
}

/// Score every ordered node pair for edge-ness: row i is the similarity of
/// each node to `unbind(edge_symbol, node_i)`. The diagonal is a NaN
/// sentinel — a node's affinity to itself is not a prediction.
pub fn predict_edges(code: &HdGraphCode, backend: &Backend) -> Result<Vec<Vec<f64>>> {
    match backend {
        Backend::Phase(ops) => predict_with(code, ops),
        Backend::Oscillator(ops) => predict_with(code, ops),
    }
}

fn predict_with<B: HdOps>(code: &HdGraphCode, ops: &B) -> Result<Vec<Vec<f64>>> {
    let n = code.node_symbols.len();
    let nodes: Vec<B::Sym> = code
        .node_symbols
        .iter()
        .map(|s| ops.encode(s))
        .collect::<Result<_>>()?;
    let edge = ops.encode(&code.edge_symbol)?;

    let mut matrix = vec![vec![f64::NAN; n]; n];
    for i in 0..n {
        let probe = ops.unbind(&edge, &nodes[i])?;
        for (j, node) in nodes.iter().enumerate() {
            if j != i {
                matrix[i][j] = ops.similarity(&probe, node)?;
            }
        }
    }
    Ok(matrix)
}

/// Collapse the (noisily symmetric) prediction matrix to one score per
/// unordered pair by averaging the two directed entries.
pub fn pair_scores(matrix: &[Vec<f64>]) -> Vec<(usize, usize, f64)> {
    let n = matrix.len();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            out.push((i, j, 0.5 * (matrix[i][j] + matrix[j][i])));
        }
    }
    out
}
