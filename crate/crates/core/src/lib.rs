//! Exact computation of weighted admissible-walk sums.
//!
//! Walks run between `-n` and `n` with nonzero even steps; each carries the
//! weight `h1 = prod 1/(n^2 - j^2)` over its intermediate vertices, optionally
//! multiplied by step weights `V(step)`. The crate enumerates walk classes,
//! sums weights by dynamic programming in exact rational, float, or symbolic
//! arithmetic, checks the associated closed-form identities, and runs
//! reproducible exploration scans.

pub mod error;
pub mod explore;
pub mod identities;
pub mod numerics;
pub mod sampling;
pub mod sums;
pub mod walk;

pub use error::{Error, Result};
pub use numerics::{
    poly_eval, proportionality_constant, ApproxComplex, ExactRational, Monomial, Semiring, SparsePolynomial, Weight,
};
pub use sums::{kappa_positive_steps, Engine, IntoSumValue, Magnitude, SumResult, SumValue};
pub use walk::{
    check_admissible, enumerate_walks, h1, h_weight, is_admissible, vertices, Direction, Potential,
    PotentialAssignment, Rejection, SignFilter, StepSet, Truncation, Walk, WalkClass,
};
