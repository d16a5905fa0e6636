use super::{compensated_sum, ApproxComplex, ExactRational, SparsePolynomial};

/// Ring operations plus exact division by the integer vertex factors
/// `n^2 - j^2`.
pub trait Semiring: Clone + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, other: &Self);
    fn mul(&self, other: &Self) -> Self;
    /// Divides by a nonzero integer.
    fn div_int(&self, d: i64) -> Self;

    fn sum_all<I: IntoIterator<Item = Self>>(terms: I) -> Self {
        terms.into_iter().fold(Self::zero(), |mut acc, t| {
            acc.add_assign(&t);
            acc
        })
    }
}

/// A scalar that can carry walk weights.
pub trait Weight: Semiring {
    /// Whether arithmetic in this domain is exact.
    const EXACT: bool;

    fn from_rational(value: &ExactRational) -> Self;
}

impl Semiring for ExactRational {
    fn zero() -> Self {
        ExactRational::zero()
    }
    fn one() -> Self {
        ExactRational::one()
    }
    fn is_zero(&self) -> bool {
        ExactRational::is_zero(self)
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div_int(&self, d: i64) -> Self {
        ExactRational::div_int(self, d)
    }
}

impl Weight for ExactRational {
    const EXACT: bool = true;
    fn from_rational(value: &ExactRational) -> Self {
        value.clone()
    }
}

impl Semiring for ApproxComplex {
    fn zero() -> Self {
        ApproxComplex::new(0.0, 0.0)
    }
    fn one() -> Self {
        ApproxComplex::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add_assign(&mut self, other: &Self) {
        *self += other;
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div_int(&self, d: i64) -> Self {
        assert!(d != 0, "division by zero");
        let d = d as f64;
        ApproxComplex::new(self.re / d, self.im / d)
    }
    fn sum_all<I: IntoIterator<Item = Self>>(terms: I) -> Self {
        let terms: Vec<Self> = terms.into_iter().collect();
        ApproxComplex::new(compensated_sum(terms.iter().map(|z| z.re)), compensated_sum(terms.iter().map(|z| z.im)))
    }
}

impl Weight for ApproxComplex {
    const EXACT: bool = false;
    fn from_rational(value: &ExactRational) -> Self {
        ApproxComplex::new(value.to_f64(), 0.0)
    }
}

impl Semiring for SparsePolynomial {
    fn zero() -> Self {
        SparsePolynomial::zero()
    }
    fn one() -> Self {
        SparsePolynomial::constant(ExactRational::one())
    }
    fn is_zero(&self) -> bool {
        SparsePolynomial::is_zero(self)
    }
    fn add_assign(&mut self, other: &Self) {
        *self = &*self + other;
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn div_int(&self, d: i64) -> Self {
        self.scale(&ExactRational::one().div_int(d))
    }
}

impl Weight for SparsePolynomial {
    const EXACT: bool = true;
    fn from_rational(value: &ExactRational) -> Self {
        SparsePolynomial::constant(value.clone())
    }
}

/// Saturating walk counter; division is the identity so the same recurrences
/// count walks instead of weighing them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct WalkCount(pub u64);

impl Semiring for WalkCount {
    fn zero() -> Self {
        WalkCount(0)
    }
    fn one() -> Self {
        WalkCount(1)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn add_assign(&mut self, other: &Self) {
        self.0 = self.0.saturating_add(other.0);
    }
    fn mul(&self, other: &Self) -> Self {
        WalkCount(self.0.saturating_mul(other.0))
    }
    fn div_int(&self, _d: i64) -> Self {
        *self
    }
}
