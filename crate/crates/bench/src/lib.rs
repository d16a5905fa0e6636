//! Fixed inputs shared by the benchmarks.

use combwalks::sampling::{rational_potential, seeded};
use combwalks::{ApproxComplex, ExactRational, Potential};

/// Seeded rational weights on `{2, 4, ..., 2k}`.
pub fn rational_weights(k: i64) -> Potential<ExactRational> {
    let steps: Vec<i64> = (1..=k).map(|i| 2 * i).collect();
    rational_potential(&mut seeded(1), &steps)
}

/// The rational weights as complex floats.
pub fn float_weights(k: i64) -> Potential<ApproxComplex> {
    rational_weights(k).map(|x| ApproxComplex::new(x.to_f64(), 0.0))
}

/// Seeded rational weights on `{+-2, ..., +-2k}`.
pub fn symmetric_weights(k: i64) -> Potential<ExactRational> {
    let steps: Vec<i64> = (1..=k).flat_map(|i| [-2 * i, 2 * i]).collect();
    rational_potential(&mut seeded(2), &steps)
}
