//! Fixtures shared by the criterion benches.

use std::sync::Arc;

use catsem::composition::LexicalSemantics;
use catsem::corpus::Weighting;
use catsem::synthetic::{TwoSenseBenchmark, TwoSenseConfig};
use catsem::vectorspace::{BasisRegistry, WeightedVector};

/// A plain space `b0 .. b{dim-1}`.
pub fn space(dim: usize) -> Arc<BasisRegistry> {
    BasisRegistry::plain("N", (0..dim).map(|i| format!("b{i}"))).expect("distinct labels")
}

/// Deterministic vector with roughly `dim / stride` non-zeros.
pub fn striped_vector(space: &Arc<BasisRegistry>, stride: usize, offset: usize) -> WeightedVector {
    let entries = (offset % stride..space.dim())
        .step_by(stride)
        .map(|i| (i, 1.0 + (i % 7) as f64));
    WeightedVector::from_entries(space, entries).expect("in range")
}

pub fn two_sense(verbs: usize) -> (TwoSenseBenchmark, LexicalSemantics) {
    let cfg = TwoSenseConfig {
        verbs,
        ..TwoSenseConfig::default()
    };
    let bench = TwoSenseBenchmark::generate(&cfg);
    let lex = bench
        .semantics(catsem::corpus::DEFAULT_WINDOW, Weighting::TfIdf)
        .expect("synthetic corpus builds");
    (bench, lex)
}
