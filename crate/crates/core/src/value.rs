//! Exact rational values.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational in lowest terms with a positive denominator.
///
/// Displays and serializes as `"p/q"` (always with the slash, `4/1` for
/// integers). Parsing also accepts a bare integer.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExactValue(BigRational);

impl ExactValue {
    pub fn zero() -> Self {
        ExactValue(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactValue(BigRational::one())
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        ExactValue(BigRational::from_integer(v.into()))
    }

    /// `num / den`; fails when `den` is zero.
    pub fn ratio<N: Into<BigInt>, D: Into<BigInt>>(num: N, den: D) -> Result<Self> {
        let den = den.into();
        if den.is_zero() {
            return Err(Error::Parameter("zero denominator".into()));
        }
        Ok(ExactValue(BigRational::new(num.into(), den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
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

    /// `self / rhs`, or `None` when `rhs` is zero.
    pub fn checked_div(&self, rhs: &ExactValue) -> Option<ExactValue> {
        if rhs.is_zero() {
            None
        } else {
            Some(ExactValue(&self.0 / &rhs.0))
        }
    }

    pub fn recip(&self) -> Option<ExactValue> {
        ExactValue::one().checked_div(self)
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn min(self, other: ExactValue) -> ExactValue {
        std::cmp::min(self, other)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }

    /// Decimal approximation with `digits` significant digits, rounded half
    /// away from zero. Plain notation for moderate magnitudes, `e` notation
    /// otherwise.
    pub fn to_decimal(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.is_negative();
        let num = self.numer().abs();
        let den = self.denom().clone();
        // exponent e with 10^e <= |v| < 10^(e+1)
        let mut e = num.to_string().len() as i64 - den.to_string().len() as i64;
        let ten = BigInt::from(10u32);
        let pow10 = |k: i64| -> BigInt { num_traits::pow(ten.clone(), k as usize) };
        let ge_pow = |e: i64| -> bool {
            if e >= 0 {
                num >= &den * pow10(e)
            } else {
                &num * pow10(-e) >= den
            }
        };
        while !ge_pow(e) {
            e -= 1;
        }
        while ge_pow(e + 1) {
            e += 1;
        }
        // scaled = round(|v| * 10^(digits-1-e))
        let shift = digits as i64 - 1 - e;
        let (sn, sd) = if shift >= 0 {
            (&num * pow10(shift), den.clone())
        } else {
            (num.clone(), &den * pow10(-shift))
        };
        let (q, r) = sn.div_rem(&sd);
        let mut scaled = if &r * 2 >= sd { q + 1 } else { q };
        if scaled.to_string().len() > digits {
            scaled /= 10;
            e += 1;
        }
        let ds = scaled.to_string();
        let sign = if neg { "-" } else { "" };
        if (-7..21).contains(&e) {
            if e >= 0 {
                let int_len = e as usize + 1;
                if int_len >= ds.len() {
                    format!("{sign}{}{}", ds, "0".repeat(int_len - ds.len()))
                } else {
                    format!("{sign}{}.{}", &ds[..int_len], &ds[int_len..])
                }
            } else {
                format!("{sign}0.{}{}", "0".repeat((-e - 1) as usize), ds)
            }
        } else {
            format!("{sign}{}.{}e{}", &ds[..1], &ds[1..], e)
        }
    }
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_int = |t: &str| -> Result<BigInt> {
            BigInt::from_str(t.trim()).map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))
        };
        match s.split_once('/') {
            Some((p, q)) => {
                let q = parse_int(q)?;
                if q.sign() == Sign::NoSign {
                    return Err(Error::Parse(format!("bad rational {s:?}: zero denominator")));
                }
                Ok(ExactValue(BigRational::new(parse_int(p)?, q)))
            }
            None => Ok(ExactValue::from_int(parse_int(s)?)),
        }
    }
}

impl Serialize for ExactValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

impl From<i64> for ExactValue {
    fn from(v: i64) -> Self {
        ExactValue::from_int(v)
    }
}

impl From<BigRational> for ExactValue {
    fn from(v: BigRational) -> Self {
        ExactValue(v)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&ExactValue> for &ExactValue {
            type Output = ExactValue;
            fn $method(self, rhs: &ExactValue) -> ExactValue {
                ExactValue((&self.0).$method(&rhs.0))
            }
        }
        impl $tr<ExactValue> for ExactValue {
            type Output = ExactValue;
            fn $method(self, rhs: ExactValue) -> ExactValue {
                ExactValue(self.0.$method(rhs.0))
            }
        }
        impl $tr<&ExactValue> for ExactValue {
            type Output = ExactValue;
            fn $method(self, rhs: &ExactValue) -> ExactValue {
                ExactValue(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

/// Panics on division by zero; use [`ExactValue::checked_div`] where the
/// divisor can vanish.
impl Div<&ExactValue> for &ExactValue {
    type Output = ExactValue;
    fn div(self, rhs: &ExactValue) -> ExactValue {
        ExactValue(&self.0 / &rhs.0)
    }
}

impl Neg for ExactValue {
    type Output = ExactValue;
    fn neg(self) -> ExactValue {
        ExactValue(-self.0)
    }
}

impl PartialEq<i64> for ExactValue {
    fn eq(&self, other: &i64) -> bool {
        self.0.is_integer() && self.0.numer() == &BigInt::from(*other)
    }
}

impl PartialOrd<i64> for ExactValue {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(&BigRational::from_integer(BigInt::from(*other)))
    }
}

/// Shorthand for `"p/q".parse::<ExactValue>().unwrap()` in tests and examples.
pub fn q(s: &str) -> ExactValue {
    s.parse().expect("valid rational literal")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_form() {
        let v = ExactValue::ratio(6, -4).unwrap();
        assert_eq!(v.to_string(), "-3/2");
        assert_eq!(q("4").to_string(), "4/1");
        assert_eq!(q("10/20"), q("1/2"));
        assert!("1/0".parse::<ExactValue>().is_err());
        assert!("abc".parse::<ExactValue>().is_err());
    }

    #[test]
    fn serde_as_string() {
        let v = q("15/1001");
        assert_eq!(serde_json::to_string(&v).unwrap(), "\"15/1001\"");
        let back: ExactValue = serde_json::from_str("\"30/2002\"").unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(q("6401").to_decimal(20), "6401.0000000000000000");
        assert_eq!(q("1/501").to_decimal(20), "0.0019960079840319361277");
        assert_eq!(q("1/3").to_decimal(5), "0.33333");
        assert_eq!(q("2/3").to_decimal(5), "0.66667");
        assert_eq!(q("-5/2").to_decimal(3), "-2.50");
        assert_eq!(q("999999/1000000").to_decimal(3), "1.00");
        assert_eq!(q("0").to_decimal(20), "0");
        assert_eq!(ExactValue::from_int(10u64.pow(12)).to_decimal(3), "1000000000000");
        let big = ExactValue::from_int(BigInt::from(2).pow(100));
        assert_eq!(big.to_decimal(5), "1.2677e30");
        assert_eq!(q("1/100000000000").to_decimal(2), "1.0e-11");
    }

    proptest! {
        #[test]
        fn decimal_close_to_f64(p in -1_000_000i64..1_000_000, qd in 1i64..1_000_000) {
            let v = ExactValue::ratio(p, qd).unwrap();
            let d: f64 = v.to_decimal(20).parse().unwrap();
            let f = p as f64 / qd as f64;
            prop_assert!((d - f).abs() <= 1e-12 * f.abs().max(1e-300));
        }

        #[test]
        fn arithmetic_is_exact(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let x = ExactValue::ratio(a, b).unwrap();
            let y = ExactValue::ratio(c, d).unwrap();
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            if !y.is_zero() {
                prop_assert_eq!(&x.checked_div(&y).unwrap() * &y, x);
            }
        }
    }
}
