//! Core algebra for phase-vector symbols.
//!
//! A symbol is a fixed-length vector of angles, each kept in the canonical
//! range `(-pi, pi]`. Binding adds angles elementwise, bundling superimposes
//! unit phasors and keeps the argument of the sum, and similarity is the mean
//! cosine of elementwise angle differences. All operations are pure: they
//! take references and return fresh values, so symbols can be shared freely
//! across threads.

mod error;
mod io;
mod ops;
mod phase;
mod rng;

pub use error::FhrrError;
pub use ops::{
    bind, bundle, bundle_weighted, distance, random_symbol, similarity, unbind, unbundle,
};
pub use phase::{wrap_phase, PhaseSymbol, Similarity, EPS_MAG};
pub use rng::Seed;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, FhrrError>;
