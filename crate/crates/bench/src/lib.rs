//! Fixtures shared by the benchmarks.

use xychain::{sample_field, ChainSpec, DisorderSpec};

/// A periodic chain of `n` sites with one Gaussian field realization.
pub fn disordered_chain(n: usize, h: f64) -> (ChainSpec, Vec<f64>) {
    let field = sample_field(&DisorderSpec::new(2.0, 0.5, 1, 7), n, 0)
        .expect("valid disorder")
        .values;
    (ChainSpec::new(n).with_field(h), field)
}
