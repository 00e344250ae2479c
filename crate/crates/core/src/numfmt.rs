//! Locale-aware numerals: German (`8.424.464.279,58`) and English
//! (`8,424,464,279.58`) grouping, with an explicit token for absent values.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ratio::ExactRatio;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Locale {
    German,
    #[default]
    English,
}

impl Locale {
    pub fn decimal_mark(self) -> char {
        match self {
            Locale::German => ',',
            Locale::English => '.',
        }
    }

    pub fn group_separator(self) -> char {
        match self {
            Locale::German => '.',
            Locale::English => ',',
        }
    }
}

impl FromStr for Locale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "de" | "german" | "de_de" | "de-de" => Ok(Locale::German),
            "en" | "english" | "en_us" | "en-us" | "en_gb" | "en-gb" => Ok(Locale::English),
            other => Err(format!("unknown locale {other:?} (expected german or english)")),
        }
    }
}

impl fmt::Display for Locale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Locale::German => "german",
            Locale::English => "english",
        })
    }
}

/// An exact decimal as quoted in a source: `mantissa / 10^decimals`.
///
/// `absent` marks an em-dash or empty cell; such values are numerically zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DecimalValue {
    pub mantissa: i128,
    pub decimals: u32,
    pub absent: bool,
}

impl DecimalValue {
    pub const ABSENT: DecimalValue = DecimalValue {
        mantissa: 0,
        decimals: 0,
        absent: true,
    };

    pub fn new(mantissa: i128, decimals: u32) -> Self {
        DecimalValue {
            mantissa,
            decimals,
            absent: false,
        }
    }

    pub fn to_ratio(&self) -> ExactRatio {
        ExactRatio::from_bigints(
            BigInt::from(self.mantissa),
            BigInt::from(10u8).pow(self.decimals),
        )
        .expect("power of ten is nonzero")
    }

    /// Same value expressed with `decimals` fraction digits, if that loses nothing.
    pub fn rescaled(&self, decimals: u32) -> Option<i128> {
        if decimals >= self.decimals {
            10i128
                .checked_pow(decimals - self.decimals)
                .and_then(|f| self.mantissa.checked_mul(f))
        } else {
            let f = 10i128.checked_pow(self.decimals - decimals)?;
            (self.mantissa % f == 0).then(|| self.mantissa / f)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum NumberErrorKind {
    #[error("empty number")]
    Empty,
    #[error("unexpected character {0:?}")]
    StrayCharacter(char),
    #[error("digit groups must have exactly three digits between separators")]
    MalformedGrouping,
    #[error("more than one decimal mark")]
    TwoDecimalMarks,
    #[error("missing digits")]
    MissingDigits,
    #[error("value too large")]
    TooLarge,
}

/// A numeral that could not be parsed, with the character offset of the problem.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at character {offset} of {text:?}")]
pub struct NumberParseError {
    pub text: String,
    pub offset: usize,
    pub kind: NumberErrorKind,
}

const ABSENT_TOKENS: [&str; 4] = ["—", "–", "--", "―"];

/// Parses a quoted numeral in the given locale.
///
/// A leading minus (ASCII or U+2212) may be followed by spaces, as in the
/// NRW ledger's `- 8.718.700`. Grouping is optional, but when present every
/// group after the first must hold exactly three digits.
pub fn parse_locale_number(text: &str, locale: Locale) -> Result<DecimalValue, NumberParseError> {
    let trimmed = text.trim();
    if trimmed.is_empty() || ABSENT_TOKENS.contains(&trimmed) {
        return Ok(DecimalValue::ABSENT);
    }

    let chars: Vec<char> = text.chars().collect();
    let fail = |offset: usize, kind: NumberErrorKind| NumberParseError {
        text: text.to_owned(),
        offset,
        kind,
    };

    let mut pos = chars.iter().take_while(|c| c.is_whitespace()).count();
    let end = chars.len() - chars.iter().rev().take_while(|c| c.is_whitespace()).count();

    let mut negative = false;
    match chars[pos] {
        '-' | '\u{2212}' => {
            negative = true;
            pos += 1;
            while pos < end && chars[pos] == ' ' {
                pos += 1;
            }
        }
        '+' => pos += 1,
        _ => {}
    }
    if pos >= end {
        return Err(fail(pos, NumberErrorKind::MissingDigits));
    }

    let decimal_mark = locale.decimal_mark();
    let group_sep = locale.group_separator();

    let mut int_digits = String::new();
    let mut frac_digits = String::new();
    let mut group_lengths: Vec<(usize, usize)> = Vec::new(); // (length, start offset)
    let mut current_group = 0usize;
    let mut group_start = pos;
    let mut saw_decimal = false;

    for (offset, &c) in chars.iter().enumerate().take(end).skip(pos) {
        if c.is_ascii_digit() {
            if saw_decimal {
                frac_digits.push(c);
            } else {
                int_digits.push(c);
                current_group += 1;
            }
        } else if c == decimal_mark {
            if saw_decimal {
                return Err(fail(offset, NumberErrorKind::TwoDecimalMarks));
            }
            saw_decimal = true;
            group_lengths.push((current_group, group_start));
        } else if c == group_sep {
            if saw_decimal {
                return Err(fail(offset, NumberErrorKind::MalformedGrouping));
            }
            group_lengths.push((current_group, group_start));
            current_group = 0;
            group_start = offset + 1;
        } else {
            return Err(fail(offset, NumberErrorKind::StrayCharacter(c)));
        }
    }
    if !saw_decimal {
        group_lengths.push((current_group, group_start));
    }

    if int_digits.is_empty() {
        return Err(fail(pos, NumberErrorKind::MissingDigits));
    }
    if saw_decimal && frac_digits.is_empty() {
        return Err(fail(end, NumberErrorKind::MissingDigits));
    }
    if group_lengths.len() > 1 {
        let (first_len, first_start) = group_lengths[0];
        if first_len == 0 || first_len > 3 {
            return Err(fail(first_start, NumberErrorKind::MalformedGrouping));
        }
        if let Some(&(_, start)) = group_lengths[1..].iter().find(|(len, _)| *len != 3) {
            return Err(fail(start, NumberErrorKind::MalformedGrouping));
        }
    }

    let decimals = frac_digits.len() as u32;
    let mantissa: i128 = format!("{int_digits}{frac_digits}")
        .parse()
        .map_err(|_| fail(pos, NumberErrorKind::TooLarge))?;
    if decimals > 30 {
        return Err(fail(pos, NumberErrorKind::TooLarge));
    }
    Ok(DecimalValue::new(
        if negative { -mantissa } else { mantissa },
        decimals,
    ))
}

/// Inserts locale grouping into a plain `[-]digits[.digits]` string.
pub fn localize_plain(plain: &str, locale: Locale) -> String {
    let (sign, body) = match plain.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", plain),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (body, None),
    };
    let mut grouped = String::with_capacity(int_part.len() + int_part.len() / 3);
    for (i, c) in int_part.chars().enumerate() {
        if i > 0 && (int_part.len() - i) % 3 == 0 {
            grouped.push(locale.group_separator());
        }
        grouped.push(c);
    }
    match frac_part {
        Some(f) => format!("{sign}{grouped}{}{f}", locale.decimal_mark()),
        None => format!("{sign}{grouped}"),
    }
}

/// Formats a quoted value back into grouped locale form, keeping its
/// original number of fraction digits.
pub fn format_locale_number(value: &DecimalValue, locale: Locale) -> String {
    if value.absent {
        return "—".to_owned();
    }
    let digits = value.mantissa.unsigned_abs().to_string();
    let decimals = value.decimals as usize;
    let padded = if digits.len() <= decimals {
        format!("{}{}", "0".repeat(decimals + 1 - digits.len()), digits)
    } else {
        digits
    };
    let (int_part, frac_part) = padded.split_at(padded.len() - decimals);
    let sign = if value.mantissa < 0 { "-" } else { "" };
    let plain = if decimals == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    };
    localize_plain(&plain, locale)
}

/// Exchanges `.` and `,`, turning a German numeral into its English form.
pub fn swap_separators(text: &str) -> String {
    text.chars()
        .map(|c| match c {
            '.' => ',',
            ',' => '.',
            other => other,
        })
        .collect()
}
