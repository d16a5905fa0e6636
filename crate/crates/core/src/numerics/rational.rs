use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numerator: impl Into<BigInt>, denominator: impl Into<BigInt>) -> Result<Self> {
        let den = denominator.into();
        if den.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        Ok(Self(BigRational::new(numerator.into(), den)))
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        Ok(Self(self.0.recip()))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        Ok(Self(&self.0 / &other.0))
    }

    pub fn pow(&self, exp: u32) -> Self {
        Self(num_traits::pow(self.0.clone(), exp as usize))
    }

    pub fn div_int(&self, d: i64) -> Self {
        assert!(d != 0, "division by zero");
        Self(&self.0 / BigInt::from(d))
    }

    /// Nearest `f64`; may overflow to infinity or underflow to zero.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Natural logarithm of `|self|`, computed without forming a float of the
    /// value itself so that astronomically small or large values stay finite.
    /// Returns `-inf` for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        ln_bigint(self.numerator()) - ln_bigint(self.denominator())
    }
}

fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x.abs() >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

impl From<i64> for ExactRational {
    fn from(v: i64) -> Self {
        Self::from_integer(v)
    }
}

impl From<BigInt> for ExactRational {
    fn from(v: BigInt) -> Self {
        Self::from_integer(v)
    }
}

impl From<BigRational> for ExactRational {
    fn from(v: BigRational) -> Self {
        Self(v)
    }
}

impl fmt::Display for ExactRational {
    /// Canonical `num/den` form, with `/den` omitted when the denominator is 1.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    /// Accepts `num/den`, a plain integer, or a finite decimal such as `-0.125`
    /// (decimals are read exactly).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid rational {s:?}"));
        if let Some((n, d)) = s.split_once('/') {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            return Self::new(n, d);
        }
        if let Some((int, frac)) = s.split_once('.') {
            if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let negative = int.starts_with('-');
            let int_digits = int.trim_start_matches(['-', '+']);
            if !int_digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let digits = format!("{int_digits}{frac}");
            let mut num = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).map_err(|_| bad())?;
            if negative {
                num = -num;
            }
            let den = num_traits::pow(BigInt::from(10), frac.len());
            return Self::new(num, den);
        }
        BigInt::from_str(s).map(Self::from_integer).map_err(|_| bad())
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

/// Panics on a zero divisor; use [`ExactRational::checked_div`] for fallible division.
impl Div for ExactRational {
    type Output = ExactRational;
    fn div(self, rhs: ExactRational) -> ExactRational {
        assert!(!rhs.is_zero(), "division by zero");
        ExactRational(self.0 / rhs.0)
    }
}

impl AddAssign<&ExactRational> for ExactRational {
    fn add_assign(&mut self, rhs: &ExactRational) {
        self.0 += &rhs.0;
    }
}

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl std::iter::Sum for ExactRational {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

/// `(-1)^n / ((n-1)!)^2`, the conjectured proportionality constant for the
/// even-step polynomial identity.
pub(crate) fn signed_inverse_factorial_square(n: u32) -> ExactRational {
    let fact: BigInt = (1..n.max(1) as u64).map(BigInt::from).product();
    let sign = if n.is_multiple_of(2) { Sign::Plus } else { Sign::Minus };
    ExactRational(BigRational::new(BigInt::from_biguint(sign, 1u32.into()), &fact * &fact))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_form() {
        assert_eq!(r("2/4").to_string(), "1/2");
        assert_eq!(r("-3/-6").to_string(), "1/2");
        assert_eq!(r("4/-2").to_string(), "-2");
        assert_eq!(r("0/7").to_string(), "0");
        assert_eq!(r("0/7"), ExactRational::zero());
        assert_eq!(r("-0.125").to_string(), "-1/8");
        assert_eq!(r("3.50").to_string(), "7/2");
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!("1/0".parse::<ExactRational>(), Err(Error::ZeroDivisor)));
        assert!("abc".parse::<ExactRational>().is_err());
        assert!("1.".parse::<ExactRational>().is_err());
        assert!("1/2/3".parse::<ExactRational>().is_err());
        assert!(ExactRational::zero().recip().is_err());
    }

    #[test]
    fn ln_abs_handles_tiny_values() {
        let tiny = ExactRational::new(1, num_traits::pow(BigInt::from(10), 400)).unwrap();
        assert_eq!(tiny.to_f64(), 0.0);
        let expected = -400.0 * 10f64.ln();
        assert!((tiny.ln_abs() - expected).abs() < 1e-9);
        assert!((r("-1/8").ln_abs() - (1.0f64 / 8.0).ln()).abs() < 1e-15);
    }

    #[test]
    fn factorial_constants() {
        assert_eq!(signed_inverse_factorial_square(2), r("1"));
        assert_eq!(signed_inverse_factorial_square(3), r("-1/4"));
        assert_eq!(signed_inverse_factorial_square(4), r("1/36"));
    }

    proptest! {
        #[test]
        fn string_round_trip(n in any::<i64>(), d in 1i64..=i64::MAX) {
            let x = ExactRational::new(n, d).unwrap();
            let back: ExactRational = x.to_string().parse().unwrap();
            prop_assert_eq!(&back, &x);
            prop_assert!(x.denominator() > &BigInt::zero());
            prop_assert!(num_integer::Integer::gcd(x.numerator(), x.denominator()).is_one());
        }
    }
}
