//! Exact scalars, the float exploration scalar, and sparse polynomials.

mod poly;
pub(crate) mod rational;
pub(crate) mod weight;

pub use poly::{poly_eval, proportionality_constant, Monomial, SparsePolynomial};
pub use rational::ExactRational;
pub use weight::{Semiring, Weight};

/// Double-precision complex value used only by exploration runs.
pub type ApproxComplex = num_complex::Complex64;

/// Neumaier-compensated sum of `f64` terms.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in terms {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let naive: f64 = [1.0, 1e100, 1.0, -1e100].iter().sum();
        assert_eq!(naive, 0.0);
        assert_eq!(compensated_sum([1.0, 1e100, 1.0, -1e100]), 2.0);
    }
}
