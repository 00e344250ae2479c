//! Euro amounts held as a signed count of cents.
//!
//! Every ledger value lives in [`Money`]. Arithmetic is checked against
//! [`Money::MAX_ABS_CENTS`]; anything beyond it is treated as a corrupted
//! dataset rather than silently wrapping.

use std::fmt;
use std::ops::Neg;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{DomainError, DomainResult};
use crate::ratio::{ExactRatio, RoundingMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Money(i64);

impl Money {
    /// Largest magnitude accepted, 10^17 cents (one quadrillion euros).
    pub const MAX_ABS_CENTS: i64 = 100_000_000_000_000_000;

    pub const ZERO: Money = Money(0);

    pub fn from_cents(cents: i64) -> DomainResult<Self> {
        if cents.unsigned_abs() > Self::MAX_ABS_CENTS as u64 {
            return Err(DomainError::Overflow {
                limit: Self::MAX_ABS_CENTS,
            });
        }
        Ok(Money(cents))
    }

    pub fn from_euros(euros: i64) -> DomainResult<Self> {
        euros
            .checked_mul(100)
            .ok_or(DomainError::Overflow {
                limit: Self::MAX_ABS_CENTS,
            })
            .and_then(Self::from_cents)
    }

    pub const fn cents(self) -> i64 {
        self.0
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn checked_add(self, other: Money) -> DomainResult<Money> {
        self.0
            .checked_add(other.0)
            .ok_or(DomainError::Overflow {
                limit: Self::MAX_ABS_CENTS,
            })
            .and_then(Self::from_cents)
    }

    pub fn checked_sub(self, other: Money) -> DomainResult<Money> {
        self.checked_add(-other)
    }

    pub fn checked_mul(self, factor: i64) -> DomainResult<Money> {
        self.0
            .checked_mul(factor)
            .ok_or(DomainError::Overflow {
                limit: Self::MAX_ABS_CENTS,
            })
            .and_then(Self::from_cents)
    }

    /// The amount in euros as an exact rational.
    pub fn to_ratio(self) -> ExactRatio {
        ExactRatio::from_bigints(BigInt::from(self.0), BigInt::from(100))
            .expect("constant denominator")
    }

    /// Rounds an exact euro amount to the nearest cent.
    pub fn from_ratio(euros: &ExactRatio, mode: RoundingMode) -> DomainResult<Money> {
        let cents = euros.scale_pow10(2).round_to_integer(mode);
        let cents: i64 = cents.try_into().map_err(|_| DomainError::Overflow {
            limit: Self::MAX_ABS_CENTS,
        })?;
        Self::from_cents(cents)
    }

    /// Plain decimal rendering with two fraction digits, e.g. `-11303100.00`.
    pub fn to_plain_string(self) -> String {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        format!("{sign}{}.{:02}", abs / 100, abs % 100)
    }
}

impl Serialize for Money {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_plain_string())
    }
}

impl<'de> Deserialize<'de> for Money {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        let euros: ExactRatio = s.parse().map_err(serde::de::Error::custom)?;
        let cents = euros.scale_pow10(2);
        if cents.denom() != &BigInt::from(1) {
            return Err(serde::de::Error::custom(format!("{s} is not a whole number of cents")));
        }
        Money::from_ratio(&euros, RoundingMode::TowardZero).map_err(serde::de::Error::custom)
    }
}

impl Neg for Money {
    type Output = Money;

    // MAX_ABS_CENTS is symmetric, so negation never leaves the valid range.
    fn neg(self) -> Money {
        Money(-self.0)
    }
}

impl fmt::Display for Money {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}€", self.to_plain_string())
    }
}

/// Exact cent sum of a list of amounts. The empty sum is zero.
pub fn money_sum<'a, I>(items: I) -> DomainResult<Money>
where
    I: IntoIterator<Item = &'a Money>,
{
    // Accumulate in i128 so the result is independent of summation order;
    // only the final total is range-checked.
    let total: i128 = items.into_iter().map(|m| i128::from(m.0)).sum();
    let total: i64 = total.try_into().map_err(|_| DomainError::Overflow {
        limit: Money::MAX_ABS_CENTS,
    })?;
    Money::from_cents(total)
}

/// Exact quotient of two amounts.
pub fn ratio_of(num: Money, den: Money) -> DomainResult<ExactRatio> {
    if den.is_zero() {
        return Err(DomainError::ZeroDenominator {
            context: "ratio_of",
        });
    }
    ExactRatio::from_bigints(BigInt::from(num.0), BigInt::from(den.0))
}
