use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::money::Money;
use crate::ratio::ExactRatio;

use super::{EstimationParameters, QualityGrade, RevenueFigures, Violation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParameterKey {
    AdviserCount,
    RevenuePerAdviserPrimary,
    RevenuePerAdviser2017,
    CpiStart,
    CpiEnd,
    OutsourcingRate,
    TotalTaxRevenue,
    MunicipalOtherTaxes,
    PrimarySubtotalCat2,
}

impl ParameterKey {
    pub const ALL: [ParameterKey; 9] = [
        ParameterKey::AdviserCount,
        ParameterKey::RevenuePerAdviserPrimary,
        ParameterKey::RevenuePerAdviser2017,
        ParameterKey::CpiStart,
        ParameterKey::CpiEnd,
        ParameterKey::OutsourcingRate,
        ParameterKey::TotalTaxRevenue,
        ParameterKey::MunicipalOtherTaxes,
        ParameterKey::PrimarySubtotalCat2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ParameterKey::AdviserCount => "adviser_count",
            ParameterKey::RevenuePerAdviserPrimary => "revenue_per_adviser_primary_eur",
            ParameterKey::RevenuePerAdviser2017 => "revenue_per_adviser_2017_eur",
            ParameterKey::CpiStart => "cpi_start",
            ParameterKey::CpiEnd => "cpi_end",
            ParameterKey::OutsourcingRate => "outsourcing_rate",
            ParameterKey::TotalTaxRevenue => "total_tax_revenue_meur",
            ParameterKey::MunicipalOtherTaxes => "municipal_other_taxes_meur",
            ParameterKey::PrimarySubtotalCat2 => "subtotal_cat2_primary_eur",
        }
    }

    pub fn required(self) -> bool {
        self != ParameterKey::PrimarySubtotalCat2
    }

    fn from_key(key: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == key)
    }
}

struct Entry {
    line: u64,
    value: String,
}

/// Reads the `key=value` parameters file. Besides each value and its
/// `<key>.grade`, an optional `<key>.source` names the cited document. Returns `None` for the parsed
/// values when anything required is missing or unreadable.
pub fn read_parameters(
    text: &str,
) -> (Option<(EstimationParameters, RevenueFigures)>, Vec<Violation>) {
    let mut violations = Vec::new();
    let mut values: BTreeMap<ParameterKey, Entry> = BTreeMap::new();
    let mut grades: BTreeMap<ParameterKey, (u64, QualityGrade)> = BTreeMap::new();
    let mut sources: BTreeMap<ParameterKey, String> = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx as u64 + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            violations.push(Violation::new("malformed-line", format!("expected key=value, got {content:?}")).at_line(line));
            continue;
        };
        let (key, value) = (key.trim(), value.trim());
        if let Some(base) = key.strip_suffix(".source") {
            match ParameterKey::from_key(base) {
                Some(param) if !value.is_empty() => {
                    if sources.insert(param, value.to_owned()).is_some() {
                        violations.push(Violation::new("duplicate-parameter", format!("{key} is given more than once")).at_line(line));
                    }
                }
                Some(_) => violations.push(Violation::new("missing-source", format!("{key} is empty")).at_line(line)),
                None => violations.push(Violation::new("unknown-parameter", format!("unknown key {key:?}")).at_line(line)),
            }
            continue;
        }
        let (base, is_grade) = match key.strip_suffix(".grade") {
            Some(base) => (base, true),
            None => (key, false),
        };
        let Some(param) = ParameterKey::from_key(base) else {
            violations.push(Violation::new("unknown-parameter", format!("unknown key {key:?}")).at_line(line));
            continue;
        };
        let duplicate = if is_grade {
            match value.parse::<QualityGrade>() {
                Ok(g) => grades.insert(param, (line, g)).is_some(),
                Err(()) => {
                    violations.push(Violation::new("invalid-grade", format!("{key} = {value:?} is not g, m or p")).at_line(line));
                    false
                }
            }
        } else {
            values
                .insert(param, Entry { line, value: value.to_owned() })
                .is_some()
        };
        if duplicate {
            violations.push(Violation::new("duplicate-parameter", format!("{key} is given more than once")).at_line(line));
        }
    }

    for key in ParameterKey::ALL {
        let has_value = values.contains_key(&key);
        if key.required() && !has_value {
            violations.push(Violation::new("missing-parameter", format!("{} is required", key.as_str())));
        }
        if has_value && !grades.contains_key(&key) {
            violations.push(Violation::new("missing-grade", format!("{}.grade is required", key.as_str())));
        }
        if !has_value {
            if let Some((line, _)) = grades.get(&key) {
                violations.push(Violation::new("unknown-parameter", format!("grade for absent {}", key.as_str())).at_line(*line));
            }
        }
    }

    let mut number = |key: ParameterKey| -> Option<ExactRatio> {
        let entry = values.get(&key)?;
        match entry.value.parse::<ExactRatio>() {
            Ok(v) if !entry.value.contains('/') => Some(v),
            _ => {
                violations.push(
                    Violation::new(
                        "malformed-value",
                        format!("{} = {:?} is not a plain English decimal", key.as_str(), entry.value),
                    )
                    .at_line(entry.line),
                );
                None
            }
        }
    };

    let adviser_count = number(ParameterKey::AdviserCount);
    let primary = number(ParameterKey::RevenuePerAdviserPrimary);
    let base2017 = number(ParameterKey::RevenuePerAdviser2017);
    let cpi_start = number(ParameterKey::CpiStart);
    let cpi_end = number(ParameterKey::CpiEnd);
    let rate = number(ParameterKey::OutsourcingRate);
    let total = number(ParameterKey::TotalTaxRevenue);
    let municipal = number(ParameterKey::MunicipalOtherTaxes);
    let subtotal = number(ParameterKey::PrimarySubtotalCat2);

    let mut whole = |key: ParameterKey, v: Option<ExactRatio>| -> Option<u64> {
        let v = v?;
        let n = (v.denom() == &BigInt::from(1)).then(|| v.numer().to_u64()).flatten();
        if n.is_none() {
            violations.push(Violation::new("malformed-value", format!("{} must be a non-negative whole number", key.as_str())));
        }
        n
    };
    let adviser_count = whole(ParameterKey::AdviserCount, adviser_count);

    // Scales an exact amount by 10^exp and requires whole cents.
    let mut money = |key: ParameterKey, v: Option<ExactRatio>, exp: u32| -> Option<Money> {
        let cents = v?.scale_pow10(exp);
        let m = (cents.denom() == &BigInt::from(1))
            .then(|| cents.numer().to_i64())
            .flatten()
            .and_then(|c| Money::from_cents(c).ok());
        if m.is_none() {
            violations.push(Violation::new(
                "malformed-value",
                format!("{} does not resolve to whole cents within range", key.as_str()),
            ));
        }
        m
    };
    let primary = money(ParameterKey::RevenuePerAdviserPrimary, primary, 2);
    let base2017 = money(ParameterKey::RevenuePerAdviser2017, base2017, 2);
    let total = money(ParameterKey::TotalTaxRevenue, total, 8);
    let municipal = money(ParameterKey::MunicipalOtherTaxes, municipal, 8);
    let subtotal_money = subtotal.map(|s| money(ParameterKey::PrimarySubtotalCat2, Some(s), 2));

    if !violations.is_empty() {
        return (None, violations);
    }

    let parsed = (|| {
        let params = EstimationParameters {
            adviser_count: adviser_count?,
            revenue_per_adviser_primary: primary?,
            revenue_per_adviser_base2017: base2017?,
            cpi_start: cpi_start?,
            cpi_end: cpi_end?,
            outsourcing_rate: rate?,
            primary_subtotal_cat2: match subtotal_money {
                Some(m) => Some(m?),
                None => None,
            },
            grades: grades
                .iter()
                .map(|(k, (_, g))| (k.as_str().to_owned(), *g))
                .collect(),
            sources: sources
                .iter()
                .map(|(k, s)| (k.as_str().to_owned(), s.clone()))
                .collect(),
        };
        let revenue = RevenueFigures {
            total_all_taxes: total?,
            municipal_other_taxes: municipal?,
        };
        Some((params, revenue))
    })();
    (parsed, violations)
}
