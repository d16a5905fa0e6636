//! Walk-sum aggregates by layered dynamic programming, with enumeration as
//! the reference path.
//!
//! All recurrences divide by the vertex factor `n^2 - j^2` exactly once, when
//! a walk arrives at an intermediate vertex; arriving at the endpoint carries
//! no factor. This mirrors `h1`'s product over `t = 1..nu`.

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numerics::weight::WalkCount;
use crate::numerics::{ApproxComplex, ExactRational, Semiring, SparsePolynomial, Weight};
use crate::walk::{enumerate_walks, h_weight, Direction, Potential, StepSet, Truncation, Walk, WalkClass};

#[derive(Clone, Debug, PartialEq)]
pub enum SumValue {
    Exact(ExactRational),
    Approx(ApproxComplex),
    Polynomial(SparsePolynomial),
}

impl SumValue {
    pub fn as_exact(&self) -> Option<&ExactRational> {
        match self {
            SumValue::Exact(x) => Some(x),
            _ => None,
        }
    }

    pub fn as_approx(&self) -> Option<ApproxComplex> {
        match self {
            SumValue::Approx(z) => Some(*z),
            SumValue::Exact(x) => Some(ApproxComplex::new(x.to_f64(), 0.0)),
            SumValue::Polynomial(_) => None,
        }
    }

    pub fn as_polynomial(&self) -> Option<&SparsePolynomial> {
        match self {
            SumValue::Polynomial(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            SumValue::Exact(x) => x.is_zero(),
            SumValue::Approx(z) => Semiring::is_zero(z),
            SumValue::Polynomial(p) => p.is_zero(),
        }
    }
}

impl std::fmt::Display for SumValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SumValue::Exact(x) => write!(f, "{x}"),
            SumValue::Approx(z) => write!(f, "approx {:.16e}{:+.16e}i", z.re, z.im),
            SumValue::Polynomial(p) => write!(f, "{p}"),
        }
    }
}

impl Serialize for SumValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SumValue::Exact(x) => x.serialize(serializer),
            SumValue::Approx(z) => {
                let mut map = serializer.serialize_map(Some(2))?;
                map.serialize_entry("re", &z.re)?;
                map.serialize_entry("im", &z.im)?;
                map.end()
            }
            SumValue::Polynomial(p) => p.serialize(serializer),
        }
    }
}

/// Scalars that can be reported in a [`SumResult`].
pub trait IntoSumValue: Weight {
    fn into_sum_value(self) -> SumValue;
}

impl IntoSumValue for ExactRational {
    fn into_sum_value(self) -> SumValue {
        SumValue::Exact(self)
    }
}

impl IntoSumValue for ApproxComplex {
    fn into_sum_value(self) -> SumValue {
        SumValue::Approx(self)
    }
}

impl IntoSumValue for SparsePolynomial {
    fn into_sum_value(self) -> SumValue {
        SumValue::Polynomial(self)
    }
}

/// Scalars with an absolute value in the same domain.
pub trait Magnitude: IntoSumValue {
    fn magnitude(&self) -> Self;
}

impl Magnitude for ExactRational {
    fn magnitude(&self) -> Self {
        self.abs()
    }
}

impl Magnitude for ApproxComplex {
    fn magnitude(&self) -> Self {
        ApproxComplex::new(self.norm(), 0.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SumResult {
    pub value: SumValue,
    pub exact: bool,
    /// Number of walks in the (possibly truncated) class; saturates at `u64::MAX`.
    pub walk_count: u64,
    pub truncated: bool,
    #[serde(rename = "truncation", skip_serializing_if = "Option::is_none")]
    pub truncation: Option<Truncation>,
    /// Contribution of the final DP layer, reported for truncated series.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub last_increment: Option<SumValue>,
}

impl SumResult {
    fn finite<T: IntoSumValue>(value: T, walk_count: u64) -> Self {
        SumResult {
            value: value.into_sum_value(),
            exact: T::EXACT,
            walk_count,
            truncated: false,
            truncation: None,
            last_increment: None,
        }
    }

    pub fn empty() -> Self {
        Self::finite(ExactRational::zero(), 0)
    }
}

/// Walk-sum computations. The only setting is whether the single-step walk
/// (`nu = 0`) belongs to the classes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Engine {
    pub exclude_single_step: bool,
}

impl Engine {
    pub fn new(exclude_single_step: bool) -> Self {
        Engine { exclude_single_step }
    }

    /// `sum h` over an enumerated finite class.
    pub fn sum_bruteforce<T: IntoSumValue>(&self, class: &WalkClass, v: &Potential<T>) -> Result<SumResult> {
        self.bruteforce_with(class, |w, c| h_weight(w, c.n, c.direction, v))
    }

    /// `sum |h|` over an enumerated finite class.
    pub fn abs_sum_bruteforce<T: Magnitude>(&self, class: &WalkClass, v: &Potential<T>) -> Result<SumResult> {
        self.bruteforce_with(class, |w, c| h_weight(w, c.n, c.direction, v).map(|h| h.magnitude()))
    }

    fn bruteforce_with<T, F>(&self, class: &WalkClass, term: F) -> Result<SumResult>
    where
        T: IntoSumValue,
        F: Fn(&Walk, &WalkClass) -> Result<T>,
    {
        let class = class.clone().excluding_single_step(class.exclude_single_step || self.exclude_single_step);
        let walks = enumerate_walks(&class)?;
        let terms = walks.iter().map(|w| term(w, &class)).collect::<Result<Vec<T>>>()?;
        let mut untruncated = class.clone();
        untruncated.truncation = None;
        let truncated = class.truncation.is_some() && !untruncated.is_finite();
        Ok(SumResult {
            value: T::sum_all(terms).into_sum_value(),
            exact: T::EXACT && !truncated,
            walk_count: walks.len() as u64,
            truncated,
            truncation: class.truncation,
            last_increment: None,
        })
    }

    /// `sum h` over `X_n^+(F)` in `O(n |F+|)` operations.
    pub fn sum_positive_dp<T: IntoSumValue>(&self, n: u32, steps: &StepSet, v: &Potential<T>) -> SumResult {
        let weighted: Vec<(i64, T)> = steps.positive_part().into_iter().map(|s| (s, v.get(s))).collect();
        let value = positive_dp(n, &weighted, self.exclude_single_step);
        SumResult::finite(value, self.positive_walk_count(n, steps))
    }

    /// `sum h` over `Y_n^-(F)`, via the reflection onto ascending walks.
    pub fn sum_negative_dp<T: IntoSumValue>(&self, n: u32, steps: &StepSet, v: &Potential<T>) -> SumResult {
        self.sum_positive_dp(n, &steps.reflected(), &v.reflected())
    }

    /// `sum |h|` over `X_n^+(F)`; `h1 > 0` there, so only the step weights
    /// need absolute values.
    pub fn abs_sum_positive<T: Magnitude>(&self, n: u32, steps: &StepSet, v: &Potential<T>) -> SumResult {
        self.sum_positive_dp(n, steps, &v.map(T::magnitude))
    }

    pub fn abs_sum_negative<T: Magnitude>(&self, n: u32, steps: &StepSet, v: &Potential<T>) -> SumResult {
        self.sum_negative_dp(n, steps, &v.map(T::magnitude))
    }

    /// The polynomial `P(z) = sum_{X_n^+(F)} h` in the variables `V(2k)`.
    pub fn sum_polynomial(&self, n: u32, steps: &StepSet) -> SparsePolynomial {
        let weighted: Vec<(i64, SparsePolynomial)> = steps
            .positive_part()
            .into_iter()
            .map(|s| (s, SparsePolynomial::variable(s).expect("positive even step")))
            .collect();
        positive_dp(n, &weighted, self.exclude_single_step)
    }

    fn positive_walk_count(&self, n: u32, steps: &StepSet) -> u64 {
        let ones: Vec<(i64, WalkCount)> = steps.positive_part().into_iter().map(|s| (s, WalkCount(1))).collect();
        positive_dp(n, &ones, self.exclude_single_step).0
    }

    /// `B_kappa(n) = sum h1` over `X_n(kappa)` with steps `{-2R, +2S}`.
    pub fn kappa_sum(&self, n: u32, r: u32, s: u32, kappa: u32) -> Result<SumResult> {
        self.kappa_generic(n, r, s, kappa, false)
    }

    /// `sum |h1|` over `X_n(kappa)`.
    pub fn kappa_abs_sum(&self, n: u32, r: u32, s: u32, kappa: u32) -> Result<SumResult> {
        self.kappa_generic(n, r, s, kappa, true)
    }

    fn kappa_generic(&self, n: u32, r: u32, s: u32, kappa: u32, abs: bool) -> Result<SumResult> {
        if r == 0 || s == 0 {
            return Err(Error::ParameterRange("R and S must be at least 1".into()));
        }
        if n == 0 {
            return Err(Error::ParameterRange("n must be positive".into()));
        }
        let Some(q) = kappa_positive_steps(n, r, s, kappa) else {
            return Ok(SumResult::empty());
        };
        let shape = KappaGrid { n, r, s, kappa, q, exclude_single_step: self.exclude_single_step };
        let value: ExactRational = shape.run(abs);
        let count: WalkCount = shape.run(false);
        Ok(SumResult::finite(value, count.0))
    }

    /// Truncated `beta_n^{+-}`: `sum h` over all admissible walks in
    /// `direction` with at most `max_steps` steps and every vertex within
    /// `n + window` of the origin.
    pub fn beta_truncated<T: IntoSumValue>(
        &self,
        n: u32,
        steps: &StepSet,
        v: &Potential<T>,
        direction: Direction,
        max_steps: usize,
        window: u32,
    ) -> Result<SumResult> {
        if n == 0 {
            return Err(Error::ParameterRange("n must be positive".into()));
        }
        if max_steps == 0 {
            return Err(Error::ParameterRange("max_steps must be at least 1".into()));
        }
        // Run ascending; a descending walk reflects onto an ascending one with
        // the same h1 and reflected step weights.
        let (steps, v) = match direction {
            Direction::Ascending => (steps.clone(), v.clone()),
            Direction::Descending => (steps.reflected(), v.reflected()),
        };
        let weighted: Vec<(i64, T)> = steps.iter().map(|s| (s, v.get(s))).collect();
        let layers = LayeredGrid { n, max_steps, window, exclude_single_step: self.exclude_single_step };
        let run = layers.run(&weighted);
        let ones: Vec<(i64, WalkCount)> = steps.iter().map(|s| (s, WalkCount(1))).collect();
        let count = layers.run(&ones).total.0;
        Ok(SumResult {
            value: run.total.into_sum_value(),
            exact: T::EXACT && !run.truncated,
            walk_count: count,
            truncated: run.truncated,
            truncation: Some(Truncation { max_steps, window }),
            last_increment: Some(run.last_increment.into_sum_value()),
        })
    }
}

/// `q = (n + R kappa) / S` when it is a whole number.
pub fn kappa_positive_steps(n: u32, r: u32, s: u32, kappa: u32) -> Option<u32> {
    let total = n as u64 + r as u64 * kappa as u64;
    total.is_multiple_of(s as u64).then(|| (total / s as u64) as u32)
}

/// Vertex-ordered recurrence over positive steps:
/// `A(-n) = 1`, `A(j) = sum_s V(s) A(j - s) / (n^2 - j^2)` for `-n < j < n`,
/// result `sum_s V(s) A(n - s)`.
pub(crate) fn positive_dp<T: Semiring>(n: u32, steps: &[(i64, T)], exclude_single_step: bool) -> T {
    let n = n as usize;
    let n2 = (n * n) as i64;
    let mut acc: Vec<T> = Vec::with_capacity(n + 1);
    acc.push(T::one());
    for idx in 1..=n {
        let terms = steps.iter().filter_map(|(s, w)| {
            let back = (*s / 2) as usize;
            if back > idx || (exclude_single_step && idx == n && back == n) {
                return None;
            }
            Some(w.mul(&acc[idx - back]))
        });
        let sum = T::sum_all(terms);
        if idx == n {
            return sum;
        }
        let j = 2 * idx as i64 - n as i64;
        acc.push(sum.div_int(n2 - j * j));
    }
    unreachable!("n >= 1 returns inside the loop")
}

/// Grid recurrence for kappa classes. A state is the number of positive and
/// negative steps taken so far, which fixes the vertex; every walk has exactly
/// `q + kappa` steps.
struct KappaGrid {
    n: u32,
    r: u32,
    s: u32,
    kappa: u32,
    q: u32,
    exclude_single_step: bool,
}

impl KappaGrid {
    fn run<T: Semiring>(&self, abs: bool) -> T {
        let (q, kappa) = (self.q as usize, self.kappa as usize);
        if self.exclude_single_step && q + kappa == 1 {
            return T::zero();
        }
        let n = self.n as i64;
        let n2 = n * n;
        let width = kappa + 1;
        let mut grid: Vec<T> = vec![T::zero(); (q + 1) * width];
        grid[0] = T::one();
        for p in 0..=q {
            for k in 0..=kappa {
                if p == 0 && k == 0 {
                    continue;
                }
                let mut acc = T::zero();
                if p > 0 {
                    acc.add_assign(&grid[(p - 1) * width + k]);
                }
                if k > 0 {
                    acc.add_assign(&grid[p * width + k - 1]);
                }
                if p == q && k == kappa {
                    return acc;
                }
                let j = -n + 2 * self.s as i64 * p as i64 - 2 * self.r as i64 * k as i64;
                grid[p * width + k] = if j == n || j == -n {
                    T::zero()
                } else {
                    let f = n2 - j * j;
                    acc.div_int(if abs { f.abs() } else { f })
                };
            }
        }
        unreachable!("the final state is always visited")
    }
}

struct LayeredGrid {
    n: u32,
    max_steps: usize,
    window: u32,
    exclude_single_step: bool,
}

struct LayeredRun<T> {
    total: T,
    last_increment: T,
    truncated: bool,
}

impl LayeredGrid {
    /// Ascending layered recurrence over `(layer, vertex)`. A walk that leaves
    /// the window or runs out of layers while carrying nonzero weight marks the
    /// run truncated. When every backward step weighs zero, vertices past the
    /// target are dead and are dropped without marking truncation.
    fn run<T: Semiring>(&self, steps: &[(i64, T)]) -> LayeredRun<T> {
        let n = self.n as i64;
        let n2 = n * n;
        let bound = n + 2 * (self.window as i64 / 2);
        let index = |j: i64| ((j + bound) / 2) as usize;
        let live: Vec<&(i64, T)> = steps.iter().filter(|(_, w)| !w.is_zero()).collect();
        let backward_free = live.iter().all(|(s, _)| *s > 0);

        let mut cur: Vec<T> = vec![T::zero(); (bound + 1) as usize];
        cur[index(-n)] = T::one();
        let mut total = T::zero();
        let mut last_increment = T::zero();
        let mut clipped = false;
        for layer in 1..=self.max_steps {
            let mut next: Vec<T> = vec![T::zero(); cur.len()];
            let mut arrivals = Vec::new();
            for (idx, value) in cur.iter().enumerate() {
                if value.is_zero() {
                    continue;
                }
                let j = 2 * idx as i64 - bound;
                for (s, w) in &live {
                    let to = j + s;
                    let moved = w.mul(value);
                    if to == n {
                        if !(self.exclude_single_step && layer == 1) {
                            arrivals.push(moved);
                        }
                        continue;
                    }
                    if to == -n || (backward_free && to > n) {
                        continue;
                    }
                    if to.abs() > bound {
                        clipped |= !moved.is_zero();
                        continue;
                    }
                    next[index(to)].add_assign(&moved.div_int(n2 - to * to));
                }
            }
            last_increment = T::sum_all(arrivals);
            total.add_assign(&last_increment);
            cur = next;
        }
        let remaining = cur.iter().any(|x| !x.is_zero());
        LayeredRun { total, last_increment, truncated: clipped || remaining }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::SignFilter;

    fn r(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    fn exact(res: &SumResult) -> ExactRational {
        res.value.as_exact().cloned().expect("exact value")
    }

    fn bb(b: &str, big_b: &str) -> Potential<ExactRational> {
        Potential::new([(2, r(b)), (4, r(big_b))]).unwrap()
    }

    fn f2() -> StepSet {
        StepSet::symmetric(4)
    }

    #[test]
    fn bruteforce_examples() {
        let e = Engine::default();
        let (b, big_b) = (r("3/5"), r("-7/2"));
        let v = bb("3/5", "-7/2");
        let res = e.sum_bruteforce(&WalkClass::positive(2, f2()), &v).unwrap();
        assert_eq!(exact(&res), &(&(&b * &b) * &r("1/4")) + &big_b);
        assert_eq!(res.walk_count, 2);
        assert!(res.exact && !res.truncated);

        let res = e.sum_bruteforce(&WalkClass::positive(3, f2()), &v).unwrap();
        let expected = &(&b.pow(3) * &r("1/64")) + &(&(&b * &big_b) * &r("1/4"));
        assert_eq!(exact(&res), expected);

        let k2 = WalkClass::kappa_class(3, 1, 2, 2).unwrap();
        let res = e.sum_bruteforce(&k2, &Potential::new([(-2, r("1")), (4, r("1"))]).unwrap()).unwrap();
        assert_eq!(res, SumResult::empty());
    }

    #[test]
    fn positive_dp_examples() {
        let e = Engine::default();
        let (b, big_b) = (r("2/3"), r("5"));
        let v = bb("2/3", "5");
        assert_eq!(exact(&e.sum_positive_dp(2, &f2(), &v)), &(&(&b * &b) * &r("1/4")) + &big_b);
        let expected =
            &(&(&b.pow(4) * &r("1/2304")) + &(&(&b * &b) * &(&big_b * &r("5/288")))) + &(&big_b.pow(2) * &r("1/16"));
        let res = e.sum_positive_dp(4, &f2(), &v);
        assert_eq!(exact(&res), expected);
        assert_eq!(res.walk_count, 5);
        let zero = Potential::<ExactRational>::new([]).unwrap();
        for n in 1..10 {
            assert!(exact(&e.sum_positive_dp(n, &f2(), &zero)).is_zero());
        }
    }

    #[test]
    fn polynomial_examples() {
        let e = Engine::default();
        assert_eq!(e.sum_polynomial(2, &f2()).to_string(), "1/4*V(2)^2 + V(4)");
        assert_eq!(e.sum_polynomial(3, &f2()).to_string(), "1/64*V(2)^3 + 1/4*V(2)*V(4)");
        assert_eq!(e.sum_polynomial(1, &StepSet::new([2]).unwrap()).to_string(), "V(2)");
        assert_eq!(e.sum_polynomial(4, &f2()).to_string(), "1/2304*V(2)^4 + 5/288*V(2)^2*V(4) + 1/16*V(4)^2");
    }

    #[test]
    fn kappa_examples() {
        let e = Engine::default();
        let k1 = e.kappa_sum(3, 1, 2, 1).unwrap();
        assert!(exact(&k1).is_zero());
        assert_eq!(k1.walk_count, 3);
        let k3 = e.kappa_sum(3, 1, 2, 3).unwrap();
        assert_eq!(exact(&k3), r("1/2949120"));
        assert_eq!(k3.walk_count, 2);
        assert_eq!(e.kappa_sum(3, 1, 2, 2).unwrap(), SumResult::empty());

        assert_eq!(exact(&e.kappa_abs_sum(3, 1, 2, 1).unwrap()), r("1/32"));
        assert_eq!(exact(&e.kappa_abs_sum(3, 1, 2, 3).unwrap()), r("1/2949120"));
        assert_eq!(e.kappa_abs_sum(3, 1, 2, 2).unwrap(), SumResult::empty());
        assert!(e.kappa_sum(3, 0, 2, 1).is_err());
    }

    #[test]
    fn kappa_zero_is_positive_only() {
        let e = Engine::default();
        // kappa = 0 over {-2, +4}: the all-(+4) walk.
        let res = e.kappa_sum(4, 1, 2, 0).unwrap();
        assert_eq!(exact(&res), r("1/16"));
        let res = e.kappa_sum(2, 1, 2, 0).unwrap();
        assert_eq!(exact(&res), r("1"));
        assert!(exact(&Engine::new(true).kappa_sum(2, 1, 2, 0).unwrap()).is_zero());
    }

    #[test]
    fn abs_sum_examples() {
        let e = Engine::default();
        let v = bb("-1", "1");
        let abs = e.abs_sum_positive(3, &f2(), &v);
        let signed = e.sum_positive_dp(3, &f2(), &v);
        assert_eq!(exact(&abs), r("1/64") + r("1/4"));
        assert_eq!(exact(&signed), -(r("1/64") + r("1/4")));
        let pos = bb("1/3", "2");
        assert_eq!(e.abs_sum_positive(5, &f2(), &pos), e.sum_positive_dp(5, &f2(), &pos));
    }

    #[test]
    fn beta_examples() {
        let e = Engine::default();
        let v = Potential::new([(-2, r("7")), (2, r("2/3")), (-4, r("-3")), (4, r("5"))]).unwrap();
        let res = e.beta_truncated(2, &f2(), &v, Direction::Ascending, 2, 0).unwrap();
        assert_eq!(exact(&res), &(&r("4/9") * &r("1/4")) + &r("5"));

        let res = e.beta_truncated(6, &f2(), &v, Direction::Ascending, 2, 3).unwrap();
        assert!(exact(&res).is_zero());
        assert!(res.truncated);

        let forward = Potential::new([(-2, r("0")), (2, r("2/3")), (4, r("5"))]).unwrap();
        for n in 1..=8 {
            let res = e.beta_truncated(n, &f2(), &forward, Direction::Ascending, n as usize, 0).unwrap();
            assert_eq!(res.value, e.sum_positive_dp(n, &f2(), &forward).value);
            assert!(!res.truncated && res.exact, "n = {n}");
        }
    }

    #[test]
    fn beta_matches_truncated_enumeration() {
        let e = Engine::default();
        let v = Potential::new([(-2, r("1/2")), (2, r("2/3")), (-4, r("-3")), (4, r("5/7"))]).unwrap();
        for n in 1..=4 {
            for dir in [Direction::Ascending, Direction::Descending] {
                for (l, w) in [(3, 0), (5, 2), (6, 4)] {
                    let dp = e.beta_truncated(n, &f2(), &v, dir, l, w).unwrap();
                    let class = WalkClass::new(n, dir, f2()).truncated(l, w);
                    let brute = e.sum_bruteforce(&class, &v).unwrap();
                    assert_eq!(dp.value, brute.value, "n={n} {dir:?} L={l} W={w}");
                    assert_eq!(dp.walk_count, brute.walk_count, "n={n} {dir:?} L={l} W={w}");
                }
            }
        }
    }

    #[test]
    fn single_step_exclusion() {
        let e = Engine::new(true);
        let v = bb("1", "1");
        assert_eq!(exact(&e.sum_positive_dp(2, &f2(), &v)), r("1/4"));
        assert_eq!(e.sum_polynomial(2, &f2()).to_string(), "1/4*V(2)^2");
        assert_eq!(e.sum_positive_dp(2, &f2(), &v).walk_count, 1);
        let brute = e.sum_bruteforce(&WalkClass::positive(2, f2()), &v).unwrap();
        assert_eq!(brute.walk_count, 1);
        let beta = e.beta_truncated(2, &f2(), &v, Direction::Ascending, 4, 0).unwrap();
        assert_eq!(exact(&beta), r("1/4"));
    }

    #[test]
    fn result_json_shape() {
        let e = Engine::default();
        let res = e.kappa_sum(3, 1, 2, 3).unwrap();
        assert_eq!(
            serde_json::to_string(&res).unwrap(),
            r#"{"value":"1/2949120","exact":true,"walk_count":2,"truncated":false}"#
        );
        let v = Potential::new([(2, ApproxComplex::new(0.5, -1.0))]).unwrap();
        let res = e.sum_positive_dp(1, &StepSet::new([2]).unwrap(), &v);
        assert_eq!(
            serde_json::to_string(&res).unwrap(),
            r#"{"value":{"re":0.5,"im":-1.0},"exact":false,"walk_count":1,"truncated":false}"#
        );
        let beta = e.beta_truncated(2, &f2(), &bb("1", "1"), Direction::Ascending, 2, 0).unwrap();
        let json = serde_json::to_value(&beta).unwrap();
        assert_eq!(json["truncation"], serde_json::json!({"L": 2, "W": 0}));
    }

    #[test]
    fn negative_class_via_reflection() {
        let e = Engine::default();
        let v = Potential::new([(-2, r("3")), (-4, r("-1/2")), (2, r("9"))]).unwrap();
        for n in 1..=6 {
            let brute = e.sum_bruteforce(&WalkClass::negative(n, f2()), &v).unwrap();
            assert_eq!(e.sum_negative_dp(n, &f2(), &v).value, brute.value);
            let class = WalkClass::new(n, Direction::Descending, f2()).with_sign_filter(SignFilter::NegativeOnly);
            assert_eq!(e.sum_bruteforce(&class, &v).unwrap().walk_count, brute.walk_count);
        }
    }
}
