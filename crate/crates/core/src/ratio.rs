//! Arbitrary-precision rationals and the single rounding step used for display.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::error::{DomainError, DomainResult};

/// How a value is brought to a fixed number of decimals for display.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum RoundingMode {
    /// Ties round away from zero.
    #[default]
    HalfUp,
    TowardZero,
}

/// Exact rational number, always kept in reduced form with a positive
/// denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRatio(BigRational);

impl ExactRatio {
    pub fn new(num: i64, den: i64) -> DomainResult<Self> {
        Self::from_bigints(BigInt::from(num), BigInt::from(den))
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> DomainResult<Self> {
        if den.is_zero() {
            return Err(DomainError::ZeroDenominator {
                context: "rational construction",
            });
        }
        // BigRational::new reduces and normalizes the sign onto the numerator.
        Ok(ExactRatio(BigRational::new(num, den)))
    }

    pub fn from_integer(n: i64) -> Self {
        ExactRatio(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        ExactRatio(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRatio(BigRational::one())
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

    pub fn abs(&self) -> Self {
        ExactRatio(self.0.abs())
    }

    pub fn recip(&self) -> DomainResult<Self> {
        Self::one().checked_div(self)
    }

    pub fn checked_div(&self, rhs: &ExactRatio) -> DomainResult<Self> {
        if rhs.is_zero() {
            return Err(DomainError::ZeroDenominator {
                context: "rational division",
            });
        }
        Ok(ExactRatio(&self.0 / &rhs.0))
    }

    /// `self * 10^exp`.
    pub fn scale_pow10(&self, exp: u32) -> Self {
        let factor = BigInt::from(10u8).pow(exp);
        ExactRatio(&self.0 * BigRational::from_integer(factor))
    }

    /// `self * 100`, for percentage display.
    pub fn percent(&self) -> Self {
        self.scale_pow10(2)
    }

    pub fn round_to_integer(&self, mode: RoundingMode) -> BigInt {
        let (quot, rem) = self.0.numer().div_rem(self.0.denom());
        match mode {
            RoundingMode::TowardZero => quot,
            RoundingMode::HalfUp => {
                // |rem| / den >= 1/2  <=>  2|rem| >= den
                let twice = rem.abs() * 2u8;
                if &twice >= self.0.denom() {
                    if self.0.is_negative() {
                        quot - 1
                    } else {
                        quot + 1
                    }
                } else {
                    quot
                }
            }
        }
    }

    /// Lossy conversion, for diagnostics only. No engine path uses it.
    pub fn to_f64_lossy(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// The shortest exact text form: a terminating decimal when the
    /// denominator only has factors 2 and 5, otherwise `p/q`.
    pub fn to_exact_string(&self) -> String {
        let mut den = self.0.denom().clone();
        let two = BigInt::from(2u8);
        let five = BigInt::from(5u8);
        let (mut twos, mut fives) = (0u32, 0u32);
        while den.is_even() {
            den /= &two;
            twos += 1;
        }
        while (&den % &five).is_zero() {
            den /= &five;
            fives += 1;
        }
        if den.is_one() {
            render_scaled(self, twos.max(fives), RoundingMode::TowardZero)
        } else {
            format!("{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

fn render_scaled(x: &ExactRatio, decimals: u32, mode: RoundingMode) -> String {
    let scaled = x.scale_pow10(decimals).round_to_integer(mode);
    let negative = scaled.sign() == Sign::Minus;
    let digits = scaled.abs().to_string();
    let decimals = decimals as usize;
    let padded = if digits.len() <= decimals {
        format!("{}{}", "0".repeat(decimals + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (int_part, frac_part) = padded.split_at(padded.len() - decimals);
    let sign = if negative { "-" } else { "" };
    if decimals == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// Renders `x` with exactly `decimals` fraction digits, rounding once.
///
/// The output uses `.` as decimal mark and no grouping; locale-specific
/// presentation is layered on top by [`crate::numfmt`]. A value that rounds
/// to zero is printed without a minus sign.
pub fn render_rounded(x: &ExactRatio, decimals: u32, mode: RoundingMode) -> String {
    render_scaled(x, decimals, mode)
}

impl fmt::Display for ExactRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_exact_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid exact number {0:?}")]
pub struct ParseRatioError(pub String);

impl FromStr for ExactRatio {
    type Err = ParseRatioError;

    /// Accepts `p/q` or a plain decimal such as `-0.223`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRatioError(s.to_owned());
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num: BigInt = num.trim().parse().map_err(|_| err())?;
            let den: BigInt = den.trim().parse().map_err(|_| err())?;
            return ExactRatio::from_bigints(num, den).map_err(|_| err());
        }
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
        let all_digits = |t: &str| t.bytes().all(|b| b.is_ascii_digit());
        if int_part.is_empty() && frac_part.is_empty()
            || !all_digits(int_part)
            || !all_digits(frac_part)
            || (body.contains('.') && frac_part.is_empty())
        {
            return Err(err());
        }
        let mantissa: BigInt = format!("{int_part}{frac_part}").parse().map_err(|_| err())?;
        let mantissa = if negative { -mantissa } else { mantissa };
        let den = BigInt::from(10u8).pow(frac_part.len() as u32);
        ExactRatio::from_bigints(mantissa, den).map_err(|_| err())
    }
}

impl Serialize for ExactRatio {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_exact_string())
    }
}

impl<'de> Deserialize<'de> for ExactRatio {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&ExactRatio> for &ExactRatio {
            type Output = ExactRatio;
            fn $method(self, rhs: &ExactRatio) -> ExactRatio {
                ExactRatio($trait::$method(&self.0, &rhs.0))
            }
        }

        impl $trait<ExactRatio> for ExactRatio {
            type Output = ExactRatio;
            fn $method(self, rhs: ExactRatio) -> ExactRatio {
                ExactRatio($trait::$method(self.0, rhs.0))
            }
        }

        impl $trait<&ExactRatio> for ExactRatio {
            type Output = ExactRatio;
            fn $method(self, rhs: &ExactRatio) -> ExactRatio {
                ExactRatio($trait::$method(self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for ExactRatio {
    type Output = ExactRatio;
    fn neg(self) -> ExactRatio {
        ExactRatio(-self.0)
    }
}

impl From<i64> for ExactRatio {
    fn from(n: i64) -> Self {
        ExactRatio::from_integer(n)
    }
}
