//! Closed-form sides of the walk-sum identities and their checks against the
//! engine.

use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numerics::rational::signed_inverse_factorial_square;
use crate::numerics::{proportionality_constant, ExactRational, SparsePolynomial};
use crate::sampling;
use crate::sums::{Engine, SumValue};
use crate::walk::{enumerate_walks, h1, StepSet, WalkClass};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    Proportional(ExactRational),
    Mismatch,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Equal => "equal",
            Verdict::Proportional(_) => "proportional",
            Verdict::Mismatch => "mismatch",
        }
    }

    pub fn is_mismatch(&self) -> bool {
        matches!(self, Verdict::Mismatch)
    }

    /// Equal, or proportional with constant `c`, for polynomial sides.
    pub fn compare(lhs: &SparsePolynomial, rhs: &SparsePolynomial) -> Verdict {
        if lhs == rhs {
            return Verdict::Equal;
        }
        match proportionality_constant(lhs, rhs) {
            Ok(c) if !c.is_zero() => Verdict::Proportional(c),
            _ => Verdict::Mismatch,
        }
    }

    pub fn compare_exact(lhs: &ExactRational, rhs: &ExactRational) -> Verdict {
        if lhs == rhs {
            Verdict::Equal
        } else {
            Verdict::Mismatch
        }
    }

    fn compare_values(lhs: &SumValue, rhs: &SumValue) -> Verdict {
        if lhs == rhs {
            Verdict::Equal
        } else {
            Verdict::Mismatch
        }
    }
}

/// A tested but unproven closed form, with whether it held.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypothesis {
    pub formula: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub id: String,
    pub params: Vec<(&'static str, i64)>,
    pub lhs: SumValue,
    pub rhs: SumValue,
    pub verdict: Verdict,
    pub hypothesis: Option<Hypothesis>,
    pub ms: f64,
}

impl IdentityReport {
    pub fn constant(&self) -> Option<&ExactRational> {
        match &self.verdict {
            Verdict::Proportional(c) => Some(c),
            _ => None,
        }
    }

    pub fn param_string(&self) -> String {
        self.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
    }
}

impl Serialize for IdentityReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Params<'a>(&'a [(&'static str, i64)]);
        impl Serialize for Params<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for (k, v) in self.0 {
                    map.serialize_entry(k, v)?;
                }
                map.end()
            }
        }
        let mut map = serializer.serialize_map(None)?;
        map.serialize_entry("id", &self.id)?;
        map.serialize_entry("params", &Params(&self.params))?;
        map.serialize_entry("lhs", &self.lhs)?;
        map.serialize_entry("rhs", &self.rhs)?;
        map.serialize_entry("verdict", self.verdict.label())?;
        if let Some(c) = self.constant() {
            map.serialize_entry("constant", c)?;
        }
        if let Some(h) = &self.hypothesis {
            map.serialize_entry("hypothesis", h)?;
        }
        map.serialize_entry("ms", &self.ms)?;
        map.end()
    }
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Closed form for `sum_{X_n^+} h` over `F = {-4, -2, 2, 4}` in `b = V(2)`, `B = V(4)`:
/// `4^{1-m} prod_{j=1}^{m} [b^2/4 + (2j-1)^2 B]` for `n = 2m`, and
/// `-b 4^{-m} prod_{j=1}^{m} [b^2/4 + (2j)^2 B]` for `n = 2m + 1`.
pub fn prop1_rhs(n: u32) -> Result<SparsePolynomial> {
    if n < 2 {
        return Err(Error::ParameterRange(format!("n = {n}, need n >= 2")));
    }
    let b = SparsePolynomial::variable(2)?;
    let big_b = SparsePolynomial::variable(4)?;
    let b_sq_quarter = (&b * &b).scale(&ExactRational::new(1, 4)?);
    let m = n / 2;
    let odd_offset = if n.is_multiple_of(2) { -1 } else { 0 };
    let mut acc = SparsePolynomial::constant(ExactRational::one());
    for j in 1..=m as i64 {
        let k = 2 * j + odd_offset;
        let factor = &b_sq_quarter + &big_b.scale(&ExactRational::from(k * k));
        acc = &acc * &factor;
    }
    let four_m = ExactRational::from(4).pow(m);
    Ok(if n.is_multiple_of(2) {
        acc.scale(&ExactRational::from(4).checked_div(&four_m)?)
    } else {
        &b * &acc.scale(&ExactRational::from(-1).checked_div(&four_m)?)
    })
}

pub const PROP1_CONSTANT_HYPOTHESIS: &str = "(-1)^n/((n-1)!)^2";

/// Compares the positive-walk polynomial over `{-4, -2, 2, 4}` with [`prop1_rhs`].
pub fn prop1_check(engine: &Engine, n: u32) -> Result<IdentityReport> {
    let start = Instant::now();
    let rhs = prop1_rhs(n)?;
    let lhs = engine.sum_polynomial(n, &StepSet::symmetric(4));
    let verdict = Verdict::compare(&lhs, &rhs);
    let holds = match &verdict {
        Verdict::Equal => ExactRational::one() == signed_inverse_factorial_square(n),
        Verdict::Proportional(c) => *c == signed_inverse_factorial_square(n),
        Verdict::Mismatch => false,
    };
    Ok(IdentityReport {
        id: "prop1".into(),
        params: vec![("n", n as i64)],
        lhs: SumValue::Polynomial(lhs),
        rhs: SumValue::Polynomial(rhs),
        verdict,
        hypothesis: Some(Hypothesis { formula: PROP1_CONSTANT_HYPOTHESIS, holds }),
        ms: elapsed_ms(start),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Prop2Variant {
    A,
    B,
}

impl Prop2Variant {
    pub fn label(self) -> &'static str {
        match self {
            Prop2Variant::A => "a",
            Prop2Variant::B => "b",
        }
    }
}

/// Sum over increasing index tuples of length `k` into `factors`, consecutive
/// indices at least `min_gap` apart, of the product of the chosen factors.
fn gapped_product_sum(factors: &[i64], k: usize, min_gap: usize) -> BigInt {
    fn go(factors: &[i64], from: usize, k: usize, min_gap: usize, prod: &BigInt, acc: &mut BigInt) {
        if k == 0 {
            *acc += prod;
            return;
        }
        for i in from..factors.len() {
            // not enough room left for the remaining k - 1 indices
            if i + (k - 1) * min_gap >= factors.len() {
                break;
            }
            go(factors, i + min_gap, k - 1, min_gap, &(prod * factors[i]), acc);
        }
    }
    let mut acc = BigInt::from(0);
    go(factors, 0, k, min_gap, &BigInt::from(1), &mut acc);
    acc
}

/// Both sides of the integer identities relating gapped index sums to
/// elementary symmetric sums of odd/even squares.
pub fn prop2_sides(k: u32, m: u32, variant: Prop2Variant) -> Result<(BigInt, BigInt)> {
    let (m, k) = (m as i64, k as usize);
    let max_k = match variant {
        Prop2Variant::A => m,
        Prop2Variant::B => m - 1,
    };
    if k < 1 || k as i64 > max_k {
        return Err(Error::ParameterRange(format!("variant {}: need 1 <= k <= {max_k}, got k = {k}", variant.label())));
    }
    let (lhs_factors, rhs_factors): (Vec<i64>, Vec<i64>) = match variant {
        Prop2Variant::A => {
            ((-m + 1..m).map(|i| m * m - i * i).collect(), (1..=m).map(|j| (2 * j - 1) * (2 * j - 1)).collect())
        }
        Prop2Variant::B => (
            (-m + 2..m).map(|i| (2 * m - 1) * (2 * m - 1) - (2 * i - 1) * (2 * i - 1)).collect(),
            (1..m).map(|j| 16 * j * j).collect(),
        ),
    };
    Ok((gapped_product_sum(&lhs_factors, k, 2), gapped_product_sum(&rhs_factors, k, 1)))
}

pub fn prop2_check(k: u32, m: u32, variant: Prop2Variant) -> Result<IdentityReport> {
    let start = Instant::now();
    let (lhs, rhs) = prop2_sides(k, m, variant)?;
    let (lhs, rhs) = (ExactRational::from(lhs), ExactRational::from(rhs));
    Ok(IdentityReport {
        id: format!("prop2{}", variant.label()),
        params: vec![("k", k as i64), ("m", m as i64)],
        verdict: Verdict::compare_exact(&lhs, &rhs),
        lhs: SumValue::Exact(lhs),
        rhs: SumValue::Exact(rhs),
        hypothesis: None,
        ms: elapsed_ms(start),
    })
}

/// All `(k, m)` pairs of both variants up to `m_max`, in parameter order.
pub fn prop2_suite(m_max: u32) -> Result<Vec<IdentityReport>> {
    let mut params = Vec::new();
    for variant in [Prop2Variant::A, Prop2Variant::B] {
        for m in 1..=m_max {
            let k_max = if variant == Prop2Variant::A { m } else { m.saturating_sub(1) };
            params.extend((1..=k_max).map(|k| (k, m, variant)));
        }
    }
    params.into_par_iter().map(|(k, m, v)| prop2_check(k, m, v)).collect()
}

/// `B_1(2m + 1)` over `{-2, +4}` vanishes.
pub fn catalan_zero_check(engine: &Engine, m: u32) -> Result<IdentityReport> {
    if m < 1 {
        return Err(Error::ParameterRange("m must be at least 1".into()));
    }
    let start = Instant::now();
    let lhs = engine.kappa_sum(2 * m + 1, 1, 2, 1)?.value;
    let rhs = SumValue::Exact(ExactRational::zero());
    Ok(IdentityReport {
        id: "catalan".into(),
        params: vec![("m", m as i64), ("n", 2 * m as i64 + 1)],
        verdict: Verdict::compare_values(&lhs, &rhs),
        lhs,
        rhs,
        hypothesis: None,
        ms: elapsed_ms(start),
    })
}

/// Nonempty subsets of `{2, 4, 6}`.
pub fn positive_step_subsets() -> Vec<Vec<i64>> {
    (1u32..8)
        .map(|mask| [2, 4, 6].into_iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, s)| s).collect())
        .collect()
}

/// Dynamic-programming results against exhaustive enumeration.
///
/// Positive sums: every `n <= n_max`, every nonempty `F+ ⊆ {2, 4, 6}`, and
/// `samples` seeded rational potentials, plus the symbolic polynomial.
/// Kappa sums: `n <= kappa_n_max`, `R, S ∈ {1, 2}`, `kappa <= 3`, signed and absolute.
pub fn dp_oracle_suite(
    engine: &Engine,
    n_max: u32,
    kappa_n_max: u32,
    samples: usize,
    seed: u64,
) -> Result<Vec<IdentityReport>> {
    let mut rng = sampling::seeded(seed);
    let potentials: Vec<_> = (0..samples).map(|_| sampling::rational_potential(&mut rng, &[2, 4, 6])).collect();

    let mut positive_jobs = Vec::new();
    for n in 1..=n_max {
        for subset in positive_step_subsets() {
            positive_jobs.push((n, subset));
        }
    }
    let mut reports: Vec<IdentityReport> = positive_jobs
        .into_par_iter()
        .map(|(n, subset)| {
            let start = Instant::now();
            let steps = StepSet::new(subset.iter().copied())?;
            let class = WalkClass::positive(n, steps.clone());
            let mut verdict = Verdict::Equal;
            let mut first = None;
            for v in &potentials {
                let dp = engine.sum_positive_dp(n, &steps, v);
                let brute = engine.sum_bruteforce(&class, v)?;
                if dp.value != brute.value || dp.walk_count != brute.walk_count {
                    verdict = Verdict::Mismatch;
                }
                first.get_or_insert((dp.value, brute.value));
            }
            let symbolic = engine.sum_polynomial(n, &steps);
            let variables = crate::walk::Potential::new(
                steps.positive_part().into_iter().map(|s| (s, SparsePolynomial::variable(s).expect("even"))),
            )?;
            let brute_poly = engine.sum_bruteforce(&class, &variables)?;
            if brute_poly.value != SumValue::Polynomial(symbolic) {
                verdict = Verdict::Mismatch;
            }
            let (lhs, rhs) =
                first.unwrap_or((SumValue::Exact(ExactRational::zero()), SumValue::Exact(ExactRational::zero())));
            let mask: i64 = subset.iter().map(|s| 1i64 << (s / 2 - 1)).sum();
            Ok(IdentityReport {
                id: "dp-oracle-positive".into(),
                params: vec![("n", n as i64), ("steps_mask", mask), ("samples", samples as i64)],
                lhs,
                rhs,
                verdict,
                hypothesis: None,
                ms: elapsed_ms(start),
            })
        })
        .collect::<Result<_>>()?;

    let mut kappa_jobs = Vec::new();
    for n in 1..=kappa_n_max {
        for r in 1..=2 {
            for s in 1..=2 {
                for kappa in 0..=3 {
                    kappa_jobs.push((n, r, s, kappa));
                }
            }
        }
    }
    let kappa_reports: Vec<IdentityReport> = kappa_jobs
        .into_par_iter()
        .map(|(n, r, s, kappa)| {
            let start = Instant::now();
            let class = WalkClass::kappa_class(n, r, s, kappa)?.excluding_single_step(engine.exclude_single_step);
            let walks = enumerate_walks(&class)?;
            let weights = walks.iter().map(|w| h1(w, n, class.direction)).collect::<Result<Vec<_>>>()?;
            let signed: ExactRational = weights.iter().cloned().sum();
            let abs: ExactRational = weights.iter().map(ExactRational::abs).sum();
            let dp = engine.kappa_sum(n, r, s, kappa)?;
            let dp_abs = engine.kappa_abs_sum(n, r, s, kappa)?;
            let agree = dp.value == SumValue::Exact(signed.clone())
                && dp_abs.value == SumValue::Exact(abs)
                && dp.walk_count == walks.len() as u64;
            Ok(IdentityReport {
                id: "dp-oracle-kappa".into(),
                params: vec![("n", n as i64), ("R", r as i64), ("S", s as i64), ("kappa", kappa as i64)],
                lhs: dp.value,
                rhs: SumValue::Exact(signed),
                verdict: if agree { Verdict::Equal } else { Verdict::Mismatch },
                hypothesis: None,
                ms: elapsed_ms(start),
            })
        })
        .collect::<Result<_>>()?;
    reports.extend(kappa_reports);
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    #[test]
    fn prop1_rhs_examples() {
        assert_eq!(prop1_rhs(2).unwrap().to_string(), "1/4*V(2)^2 + V(4)");
        assert_eq!(prop1_rhs(3).unwrap().to_string(), "-1/16*V(2)^3 - V(2)*V(4)");
        assert_eq!(prop1_rhs(4).unwrap().to_string(), "1/64*V(2)^4 + 5/8*V(2)^2*V(4) + 9/4*V(4)^2");
        assert!(prop1_rhs(1).is_err());
    }

    #[test]
    fn prop1_check_examples() {
        let e = Engine::default();
        assert_eq!(prop1_check(&e, 2).unwrap().verdict, Verdict::Equal);
        assert_eq!(prop1_check(&e, 3).unwrap().verdict, Verdict::Proportional(r("-1/4")));
        let four = prop1_check(&e, 4).unwrap();
        assert_eq!(four.verdict, Verdict::Proportional(r("1/36")));
        assert!(four.hypothesis.unwrap().holds);
    }

    #[test]
    fn prop2_examples() {
        assert_eq!(prop2_sides(1, 2, Prop2Variant::A).unwrap(), (10.into(), 10.into()));
        assert_eq!(prop2_sides(2, 2, Prop2Variant::A).unwrap(), (9.into(), 9.into()));
        assert_eq!(prop2_sides(1, 3, Prop2Variant::B).unwrap(), (80.into(), 80.into()));
        assert!(prop2_sides(0, 3, Prop2Variant::A).is_err());
        assert!(prop2_sides(3, 3, Prop2Variant::B).is_err());
        assert!(prop2_sides(4, 3, Prop2Variant::A).is_err());
    }

    #[test]
    fn gapped_sum_small_cases() {
        // pairs from 5 slots at distance >= 2: (0,2),(0,3),(0,4),(1,3),(1,4),(2,4)
        assert_eq!(gapped_product_sum(&[1, 1, 1, 1, 1], 2, 2), 6.into());
        assert_eq!(gapped_product_sum(&[1, 1, 1, 1, 1], 3, 2), 1.into());
        assert_eq!(gapped_product_sum(&[2, 3, 5], 2, 1), (6 + 10 + 15).into());
        assert_eq!(gapped_product_sum(&[2, 3], 3, 1), 0.into());
    }

    #[test]
    fn catalan_examples() {
        let e = Engine::default();
        for m in 1..=3 {
            assert_eq!(catalan_zero_check(&e, m).unwrap().verdict, Verdict::Equal);
        }
        assert!(catalan_zero_check(&e, 0).is_err());
    }

    #[test]
    fn report_json() {
        let e = Engine::default();
        let rep = prop1_check(&e, 3).unwrap();
        let json = serde_json::to_value(&rep).unwrap();
        assert_eq!(json["id"], "prop1");
        assert_eq!(json["params"]["n"], 3);
        assert_eq!(json["verdict"], "proportional");
        assert_eq!(json["constant"], "-1/4");
        assert_eq!(json["hypothesis"]["holds"], true);
        assert!(json["ms"].is_number());
        let rep = prop2_check(1, 2, Prop2Variant::A).unwrap();
        let json = serde_json::to_value(&rep).unwrap();
        assert_eq!(json["lhs"], "10");
        assert!(json.get("constant").is_none());
    }

    #[test]
    fn verdict_rejects_zero_constant() {
        let x = SparsePolynomial::variable(2).unwrap();
        assert_eq!(Verdict::compare(&SparsePolynomial::zero(), &x), Verdict::Mismatch);
        assert_eq!(Verdict::compare(&x.scale(&r("3")), &x), Verdict::Proportional(r("3")));
    }
}
