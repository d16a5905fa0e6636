use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ExactRational;
use crate::error::{Error, Result};
use crate::walk::Potential;

/// Exponent vector over the variables `V(2), V(4), V(6), ...`.
///
/// Entry `k - 1` holds the exponent of `V(2k)`. Trailing zeros are trimmed,
/// so the derived ordering is the lexicographic order of the dense vectors.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    /// The monomial `V(step)`; `step` must be a positive even integer.
    pub fn variable(step: i64) -> Result<Self> {
        if step <= 0 || step % 2 != 0 {
            return Err(Error::InvalidStep(step));
        }
        let mut exps = vec![0; (step / 2) as usize];
        exps[(step / 2 - 1) as usize] = 1;
        Ok(Monomial(exps))
    }

    pub fn from_exponents<I: IntoIterator<Item = (i64, u32)>>(pairs: I) -> Result<Self> {
        let mut exps: Vec<u32> = Vec::new();
        for (step, e) in pairs {
            if step <= 0 || step % 2 != 0 {
                return Err(Error::InvalidStep(step));
            }
            let idx = (step / 2 - 1) as usize;
            if exps.len() <= idx {
                exps.resize(idx + 1, 0);
            }
            exps[idx] += e;
        }
        Ok(Monomial(exps).trimmed())
    }

    fn trimmed(mut self) -> Self {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    pub fn exponent(&self, step: i64) -> u32 {
        if step <= 0 || step % 2 != 0 {
            return 0;
        }
        self.0.get((step / 2 - 1) as usize).copied().unwrap_or(0)
    }

    /// Nonzero `(step, exponent)` pairs in increasing step order.
    pub fn factors(&self) -> impl Iterator<Item = (i64, u32)> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (2 * (i as i64 + 1), e))
    }

    /// Total degree.
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `sum k * c_k` for `prod V(2k)^{c_k}`: the half step-sum of any walk
    /// producing this monomial.
    pub fn weighted_degree(&self) -> u64 {
        self.factors().map(|(s, e)| (s / 2) as u64 * e as u64).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let (long, short) = if self.0.len() >= other.0.len() { (self, other) } else { (other, self) };
        let mut exps = long.0.clone();
        for (e, o) in exps.iter_mut().zip(&short.0) {
            *e += o;
        }
        Monomial(exps)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (s, e) in self.factors() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "V({s})")?;
            } else {
                write!(f, "V({s})^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Multivariate polynomial in `V(2k)` with exact rational coefficients.
/// No zero coefficients are stored, so structural equality is polynomial
/// equality.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparsePolynomial {
    terms: BTreeMap<Monomial, ExactRational>,
}

impl SparsePolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: ExactRational) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn monomial(m: Monomial, c: ExactRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    /// The polynomial `V(step)`.
    pub fn variable(step: i64) -> Result<Self> {
        Ok(Self::monomial(Monomial::variable(step)?, ExactRational::one()))
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, ExactRational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: &ExactRational) {
        use std::collections::btree_map::Entry;
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ExactRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> ExactRational {
        self.terms.get(m).cloned().unwrap_or_else(ExactRational::zero)
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    /// Steps `2k` whose variable occurs in some term, ascending.
    pub fn variables(&self) -> Vec<i64> {
        let mut vars: Vec<i64> = self.terms.keys().flat_map(|m| m.factors().map(|(s, _)| s)).collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    /// Evaluates with a lookup that returns `None` for unassigned variables.
    pub fn eval_with<F>(&self, mut value: F) -> Result<ExactRational>
    where
        F: FnMut(i64) -> Option<ExactRational>,
    {
        let mut cache: BTreeMap<i64, ExactRational> = BTreeMap::new();
        for s in self.variables() {
            let v = value(s).ok_or(Error::UnassignedVariable(s))?;
            cache.insert(s, v);
        }
        Ok(self.terms.iter().map(|(m, c)| m.factors().fold(c.clone(), |acc, (s, e)| &acc * &cache[&s].pow(e))).sum())
    }
}

/// Evaluates `p` at an exact assignment; every variable of `p` must be assigned.
pub fn poly_eval(p: &SparsePolynomial, a: &Potential<ExactRational>) -> Result<ExactRational> {
    p.eval_with(|s| a.assigned(s).cloned())
}

/// Returns `c` with `p = c * q` termwise.
pub fn proportionality_constant(p: &SparsePolynomial, q: &SparsePolynomial) -> Result<ExactRational> {
    if q.is_zero() {
        return if p.is_zero() { Ok(ExactRational::zero()) } else { Err(Error::ZeroDivisor) };
    }
    if p.is_zero() {
        return Ok(ExactRational::zero());
    }
    if p.len() != q.len() {
        return Err(Error::NotProportional);
    }
    let mut constant: Option<ExactRational> = None;
    for ((pm, pc), (qm, qc)) in p.terms.iter().zip(q.terms.iter()) {
        if pm != qm {
            return Err(Error::NotProportional);
        }
        let ratio = pc.checked_div(qc)?;
        match &constant {
            None => constant = Some(ratio),
            Some(c) if *c == ratio => {}
            Some(_) => return Err(Error::NotProportional),
        }
    }
    Ok(constant.expect("nonempty"))
}

impl<'a> Add<&'a SparsePolynomial> for &'a SparsePolynomial {
    type Output = SparsePolynomial;
    fn add(self, rhs: &'a SparsePolynomial) -> SparsePolynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl<'a> Mul<&'a SparsePolynomial> for &'a SparsePolynomial {
    type Output = SparsePolynomial;
    fn mul(self, rhs: &'a SparsePolynomial) -> SparsePolynomial {
        let mut out = SparsePolynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), &(c1 * c2));
            }
        }
        out
    }
}

impl fmt::Display for SparsePolynomial {
    /// Human-readable form such as `1/4*V(2)^2 + V(4)`, highest powers of
    /// the smallest step first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let (neg, mag) = (c.is_negative(), c.abs());
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let is_one = mag == ExactRational::one();
            if *m == Monomial::one() {
                write!(f, "{mag}")?;
            } else if is_one {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    exponents: BTreeMap<String, u32>,
    coeff: ExactRational,
}

impl Serialize for SparsePolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        // BTreeMap<String, _> would order "10" before "2"; emit keys in step order.
        use serde::ser::{SerializeMap, SerializeSeq, SerializeStruct};
        struct Exps<'a>(&'a Monomial);
        impl Serialize for Exps<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(None)?;
                for (step, e) in self.0.factors() {
                    map.serialize_entry(&step.to_string(), &e)?;
                }
                map.end()
            }
        }
        struct Term<'a>(&'a Monomial, &'a ExactRational);
        impl Serialize for Term<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut st = s.serialize_struct("Term", 2)?;
                st.serialize_field("exponents", &Exps(self.0))?;
                st.serialize_field("coeff", self.1)?;
                st.end()
            }
        }
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (m, c) in &self.terms {
            seq.serialize_element(&Term(m, c))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for SparsePolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let reprs = Vec::<TermRepr>::deserialize(deserializer)?;
        let mut terms = Vec::with_capacity(reprs.len());
        for t in reprs {
            let pairs = t
                .exponents
                .iter()
                .map(|(k, &e)| k.parse::<i64>().map(|s| (s, e)).map_err(D::Error::custom))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            terms.push((Monomial::from_exponents(pairs).map_err(D::Error::custom)?, t.coeff));
        }
        Ok(SparsePolynomial::from_terms(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    fn v(step: i64) -> SparsePolynomial {
        SparsePolynomial::variable(step).unwrap()
    }

    fn c(s: &str) -> SparsePolynomial {
        SparsePolynomial::constant(r(s))
    }

    fn potential(pairs: &[(i64, &str)]) -> Potential<ExactRational> {
        Potential::new(pairs.iter().map(|&(s, x)| (s, r(x)))).unwrap()
    }

    #[test]
    fn eval_kills_zero_weighted_term() {
        let p = &(&v(2) * &v(2)).scale(&r("1/4")) + &v(4);
        assert_eq!(poly_eval(&p, &potential(&[(2, "2"), (4, "0")])).unwrap(), r("1"));
    }

    #[test]
    fn eval_zero_polynomial() {
        assert_eq!(poly_eval(&SparsePolynomial::zero(), &potential(&[])).unwrap(), r("0"));
    }

    #[test]
    fn eval_reports_missing_variable() {
        let p = &v(2) + &v(4);
        let err = poly_eval(&p, &potential(&[(2, "1")])).unwrap_err();
        assert_eq!(err, Error::UnassignedVariable(4));
        assert_eq!(err.to_string(), "unassigned variable V(4)");
    }

    #[test]
    fn proportionality_examples() {
        let x = v(2);
        let y = v(4);
        let two = &(&x + &y).scale(&r("2"));
        assert_eq!(proportionality_constant(two, &(&x + &y)).unwrap(), r("2"));
        assert_eq!(proportionality_constant(&SparsePolynomial::zero(), &(&x + &y)).unwrap(), r("0"));
        assert_eq!(proportionality_constant(&x, &y), Err(Error::NotProportional));
        assert_eq!(proportionality_constant(&x, &SparsePolynomial::zero()), Err(Error::ZeroDivisor));
        let skew = &x + &y.scale(&r("2"));
        assert_eq!(proportionality_constant(&skew, &(&x + &y)), Err(Error::NotProportional));
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let p = &(&v(2) + &v(4)) + &v(2).scale(&r("-1"));
        assert_eq!(p, v(4));
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn json_form_is_sorted_and_canonical() {
        let p = &(&(&v(2) * &v(2)).scale(&r("1/4")) + &v(4)) + &v(20);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(
            json,
            r#"[{"exponents":{"20":1},"coeff":"1"},{"exponents":{"4":1},"coeff":"1"},{"exponents":{"2":2},"coeff":"1/4"}]"#
        );
        let back: SparsePolynomial = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        assert_eq!(p.to_string(), "1/4*V(2)^2 + V(4) + V(20)");
    }

    #[test]
    fn weighted_degree() {
        let m = Monomial::from_exponents([(2, 2), (6, 1)]).unwrap();
        assert_eq!(m.weighted_degree(), 5);
        assert_eq!(m.degree(), 3);
        assert!(Monomial::variable(3).is_err());
    }

    fn small_poly() -> impl Strategy<Value = SparsePolynomial> {
        prop::collection::vec(((0u32..3, 0u32..3, 0u32..2), -5i64..=5, 1i64..=4), 0..5).prop_map(|ts| {
            SparsePolynomial::from_terms(ts.into_iter().map(|((a, b, c), n, d)| {
                (Monomial::from_exponents([(2, a), (4, b), (6, c)]).unwrap(), ExactRational::new(n, d).unwrap())
            }))
        })
    }

    fn small_point() -> impl Strategy<Value = Potential<ExactRational>> {
        prop::collection::vec((-6i64..=6, 1i64..=5), 3).prop_map(|xs| {
            Potential::new(
                xs.into_iter().enumerate().map(|(i, (n, d))| (2 * (i as i64 + 1), ExactRational::new(n, d).unwrap())),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn eval_is_ring_homomorphism(p in small_poly(), q in small_poly(), a in small_point()) {
            let ep = poly_eval(&p, &a).unwrap();
            let eq = poly_eval(&q, &a).unwrap();
            prop_assert_eq!(poly_eval(&(&p + &q), &a).unwrap(), &ep + &eq);
            prop_assert_eq!(poly_eval(&(&p * &q), &a).unwrap(), &ep * &eq);
        }

        #[test]
        fn proportionality_recovers_scale(q in small_poly(), n in -9i64..=9, d in 1i64..=9) {
            prop_assume!(!q.is_zero());
            let k = ExactRational::new(n, d).unwrap();
            prop_assert_eq!(proportionality_constant(&q.scale(&k), &q).unwrap(), k);
        }

        #[test]
        fn json_round_trip(p in small_poly()) {
            let json = serde_json::to_string(&p).unwrap();
            let back: SparsePolynomial = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(back, p);
        }
    }

    #[test]
    fn constant_display() {
        assert_eq!(c("-3/2").to_string(), "-3/2");
        assert_eq!(SparsePolynomial::zero().to_string(), "0");
    }
}
