//! Generators and property checks shared by the proptest suite and the
//! acceptance runner.

#![allow(dead_code)]

use std::collections::BTreeMap;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use adminratio_core::bundled::germany_2021;
use adminratio_core::cat1::compute_cat1;
use adminratio_core::ledger::{
    AggregationMethod, BudgetPosition, Classification, JurisdictionLedger, RevenueFigures, ScaleUnit,
    SourcePage, SourceRef,
};
use adminratio_core::model::ModelInputs;
use adminratio_core::numfmt::{format_locale_number, parse_locale_number, swap_separators, DecimalValue, Locale};
use adminratio_core::sensitivity::{propagate_intervals, sweep, Bounds, IntervalMap, ParameterRef};
use adminratio_core::taxpayer::{compute_cat23, gross_up, TaxpayerInputs};
use adminratio_core::{ExactRatio, Money};

pub fn ratio(n: i64, d: i64) -> ExactRatio {
    ExactRatio::new(n, d).unwrap()
}

pub fn baseline() -> ModelInputs {
    ModelInputs::from_dataset(&germany_2021().unwrap()).unwrap()
}

pub fn positive_ratio() -> impl Strategy<Value = ExactRatio> {
    (1i64..1_000_000_000_000, 1i64..1_000_000).prop_map(|(n, d)| ratio(n, d))
}

pub fn any_ratio() -> impl Strategy<Value = ExactRatio> {
    (-1_000_000_000_000i64..1_000_000_000_000, 1i64..1_000_000).prop_map(|(n, d)| ratio(n, d))
}

/// Rates in (0, 1].
pub fn rate() -> impl Strategy<Value = ExactRatio> {
    (1i64..=1_000_000).prop_flat_map(|d| (1..=d).prop_map(move |n| ratio(n, d)))
}

pub fn taxpayer_inputs() -> impl Strategy<Value = TaxpayerInputs> {
    (positive_ratio(), positive_ratio(), positive_ratio(), positive_ratio(), 1i64..1_000_000, rate()).prop_map(
        |(primary, base, cpi_start, cpi_end, count, rate)| TaxpayerInputs {
            revenue_per_adviser_primary: primary,
            revenue_per_adviser_2017: base,
            cpi_start,
            cpi_end,
            adviser_count: ExactRatio::from_integer(count),
            outsourcing_rate: rate,
        },
    )
}

// ---- synthetic ledgers ----

fn position(code: String, class: Classification, cents: i64) -> BudgetPosition {
    let amount = Money::from_cents(cents).unwrap();
    BudgetPosition {
        quoted_value: format_locale_number(&DecimalValue::new(cents.into(), 2), Locale::German),
        code: code.clone(),
        name_original: code.clone(),
        name_en: code,
        scale: ScaleUnit::Euro,
        absent: false,
        amount,
        classification: class,
        source: SourceRef::new("Synthetic 2021", SourcePage::Page(1)),
    }
}

/// One jurisdiction of the given method with a positive ministry total and a
/// non-negative cost.
pub fn jurisdiction(method: AggregationMethod, id: usize) -> impl Strategy<Value = JurisdictionLedger> {
    let amounts = || prop::collection::vec(0i64..1_000_000_000_000, 1..5);
    (amounts(), amounts(), amounts(), 1u64..100_000_000).prop_map(move |(a, b, c, population)| {
        let mut positions = Vec::new();
        let mut push = |class, values: &[i64], tag: &str| {
            for (i, v) in values.iter().enumerate() {
                positions.push(position(format!("{tag}{i}"), class, *v));
            }
        };
        match method {
            AggregationMethod::Subtractive => {
                // Total = non-tax items plus a positive remainder.
                let total = b.iter().sum::<i64>() + a[0] + 1;
                push(Classification::MinistryTotal, &[total], "t");
                push(Classification::NonTaxAdmin, &b, "n");
            }
            AggregationMethod::Additive => {
                let total = a.iter().sum::<i64>() + c[0] + 1;
                push(Classification::MinistryTotal, &[total], "t");
                push(Classification::PureTaxAdmin, &a, "p");
            }
            AggregationMethod::Allocative => {
                // Keep pure + non-tax strictly positive.
                let pure: Vec<i64> = a.iter().map(|v| v + 1).collect();
                let total = pure.iter().chain(&b).chain(&c).sum::<i64>();
                push(Classification::MinistryTotal, &[total], "t");
                push(Classification::PureTaxAdmin, &pure, "p");
                push(Classification::NonTaxAdmin, &b, "n");
                push(Classification::Neutral, &c, "u");
            }
        }
        JurisdictionLedger {
            id: format!("j{id}"),
            name_en: format!("Jurisdiction {id}"),
            population,
            positions,
            method,
            source: SourceRef::new("Synthetic 2021", SourcePage::Page(1)),
        }
    })
}

pub fn ledgers(methods: &'static [AggregationMethod]) -> impl Strategy<Value = Vec<JurisdictionLedger>> {
    prop::collection::vec(prop::sample::select(methods), 1..6).prop_flat_map(|ms| {
        ms.into_iter()
            .enumerate()
            .map(|(i, m)| jurisdiction(m, i))
            .collect::<Vec<_>>()
    })
}

pub const SUB_ADD: &[AggregationMethod] = &[AggregationMethod::Subtractive, AggregationMethod::Additive];
pub const ALL_METHODS: &[AggregationMethod] = &[
    AggregationMethod::Subtractive,
    AggregationMethod::Additive,
    AggregationMethod::Allocative,
];

pub fn model(methods: &'static [AggregationMethod]) -> impl Strategy<Value = ModelInputs> {
    (
        ledgers(methods),
        (1i64..100_000_000, 1i64..100_000_000),
        (1i64..1_000, 1i64..1_000, 1i64..1_000_000, rate()),
        (1i64..1_000_000_000_000, 0i64..1_000_000_000),
    )
        .prop_map(|(ledgers, (primary, base), (cpi_start, cpi_end, count, rate), (revenue, municipal))| {
            ModelInputs {
                ledgers,
                taxpayer: TaxpayerInputs {
                    revenue_per_adviser_primary: Money::from_cents(primary).unwrap().to_ratio(),
                    revenue_per_adviser_2017: Money::from_cents(base).unwrap().to_ratio(),
                    cpi_start: ExactRatio::from_integer(cpi_start),
                    cpi_end: ExactRatio::from_integer(cpi_end),
                    adviser_count: ExactRatio::from_integer(count),
                    outsourcing_rate: rate,
                },
                revenue: RevenueFigures {
                    total_all_taxes: Money::from_cents(revenue + municipal + 1).unwrap(),
                    municipal_other_taxes: Money::from_cents(municipal).unwrap(),
                },
            }
        })
}

/// Multiplies every monetary input by `k`.
pub fn scale_money(m: &ModelInputs, k: i64) -> ModelInputs {
    let mut out = m.clone();
    for ledger in &mut out.ledgers {
        for p in &mut ledger.positions {
            p.amount = p.amount.checked_mul(k).unwrap();
        }
    }
    let kr = ExactRatio::from_integer(k);
    out.taxpayer.revenue_per_adviser_primary = &out.taxpayer.revenue_per_adviser_primary * &kr;
    out.taxpayer.revenue_per_adviser_2017 = &out.taxpayer.revenue_per_adviser_2017 * &kr;
    out.revenue.total_all_taxes = out.revenue.total_all_taxes.checked_mul(k).unwrap();
    out.revenue.municipal_other_taxes = out.revenue.municipal_other_taxes.checked_mul(k).unwrap();
    out
}

// ---- property checks ----

pub fn check_gross_up(c: &ExactRatio, r: &ExactRatio) -> Result<(), TestCaseError> {
    let grossed = gross_up(c, r).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(&(&grossed * r), c);
    Ok(())
}

pub fn check_cat_sum(inputs: &TaxpayerInputs) -> Result<(), TestCaseError> {
    let s = compute_cat23(inputs).map_err(|e| TestCaseError::fail(e.to_string()))?;
    for scenario in [&s.primary, &s.alternative] {
        prop_assert_eq!(&(&scenario.cat3 + &scenario.cat2), &scenario.cat23_total);
    }
    Ok(())
}

pub fn check_scale_exact(m: &ModelInputs, k: i64) -> Result<(), TestCaseError> {
    let base = m.evaluate().map_err(|e| TestCaseError::fail(e.to_string()))?.results;
    let scaled = scale_money(m, k).evaluate().map_err(|e| TestCaseError::fail(e.to_string()))?.results;
    prop_assert_eq!(&base.ratio_excl_municipal, &scaled.ratio_excl_municipal);
    prop_assert_eq!(&base.ratio_incl_municipal, &scaled.ratio_incl_municipal);
    Ok(())
}

/// Allocation rounds each neutral share to the cent, so scaling by `k` moves
/// every allocative jurisdiction's cost by at most (k+1)/2 cents away from
/// k times the unscaled cost.
pub fn check_scale_bounded(m: &ModelInputs, k: i64) -> Result<(), TestCaseError> {
    let base = m.evaluate().map_err(|e| TestCaseError::fail(e.to_string()))?;
    let scaled = scale_money(m, k).evaluate().map_err(|e| TestCaseError::fail(e.to_string()))?;
    let allocative = m
        .ledgers
        .iter()
        .filter(|l| l.method == AggregationMethod::Allocative)
        .count() as i64;
    let slack_cents = ExactRatio::from_integer(allocative) * ratio(k + 1, 2);
    let revenue_k = scaled.results.ttrnotabm.to_ratio().scale_pow10(2);
    let bound = slack_cents.checked_div(&revenue_k).unwrap();
    let gap = (&scaled.results.ratio_excl_municipal - &base.results.ratio_excl_municipal).abs();
    prop_assert!(gap <= bound, "gap {} exceeds {}", gap, bound);
    Ok(())
}

/// Strictly increasing rates in (0, 1].
pub fn rate_grid() -> impl Strategy<Value = Vec<ExactRatio>> {
    prop::collection::btree_set(1i64..=10_000, 2..8)
        .prop_map(|set| set.into_iter().map(|n| ratio(n, 10_000)).collect())
}

pub fn check_sweep_decreasing(m: &ModelInputs, grid: &[ExactRatio]) -> Result<(), TestCaseError> {
    let s = sweep(m, ParameterRef::OutsourcingRate, grid).map_err(|e| TestCaseError::fail(e.to_string()))?;
    for pair in s.ratios.windows(2) {
        prop_assert!(pair[0] > pair[1]);
    }
    Ok(())
}

/// Parameter boxes around the baseline: each chosen parameter gets
/// [v·(1-a), v·(1+b)] with a, b ∈ [0, 0.5]; the rate is capped at 1.
pub fn interval_map() -> impl Strategy<Value = IntervalMap> {
    prop::collection::vec(prop::option::of((0i64..=50, 0i64..=50)), ParameterRef::ALL.len())
        .prop_filter("at least one parameter", |v| v.iter().any(Option::is_some))
        .prop_map(|chosen| {
            let base = baseline();
            ParameterRef::ALL
                .into_iter()
                .zip(chosen)
                .filter_map(|(p, c)| c.map(|(down, up)| (p, down, up)))
                .map(|(p, down, up)| {
                    let v = p.value_in(&base);
                    let low = &v * &ratio(100 - down, 100);
                    let mut high = &v * &ratio(100 + up, 100);
                    if p == ParameterRef::OutsourcingRate && high > ExactRatio::one() {
                        high = ExactRatio::one();
                    }
                    (p, Bounds::new(low, high))
                })
                .collect()
        })
}

/// Headline ratio from first principles, independent of the engine's
/// cost modules: (Cat1 + mean of both grossed-up scenarios) / net revenue.
pub fn direct_ratio(cat1: &ExactRatio, revenue: &ExactRatio, v: &BTreeMap<ParameterRef, ExactRatio>) -> ExactRatio {
    let count = &v[&ParameterRef::AdviserCount];
    let rate = &v[&ParameterRef::OutsourcingRate];
    let primary = &v[&ParameterRef::RevenuePerAdviserPrimary] * count;
    let adjusted = (&v[&ParameterRef::RevenuePerAdviser2017] * &v[&ParameterRef::CpiEnd])
        .checked_div(&v[&ParameterRef::CpiStart])
        .unwrap();
    let alternative = &adjusted * count;
    let mean = (primary + alternative).checked_div(&(rate * &ratio(2, 1))).unwrap();
    (cat1 + &mean).checked_div(revenue).unwrap()
}

/// Brute force over all 2^n corners of the box.
pub fn check_intervals_vs_corners(intervals: &IntervalMap) -> Result<(), TestCaseError> {
    let base = baseline();
    let fast = propagate_intervals(&base, intervals).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let eval = base.evaluate().unwrap();
    let cat1 = eval.results.cat1.to_ratio();
    let revenue = eval.results.ttrnotabm.to_ratio();
    let params: Vec<_> = intervals.keys().copied().collect();
    let mut lo: Option<ExactRatio> = None;
    let mut hi: Option<ExactRatio> = None;
    for mask in 0u32..(1 << params.len()) {
        let mut values: BTreeMap<_, _> = ParameterRef::ALL.into_iter().map(|p| (p, p.value_in(&base))).collect();
        for (bit, p) in params.iter().enumerate() {
            let b = &intervals[p];
            values.insert(*p, if mask & (1 << bit) == 0 { b.low.clone() } else { b.high.clone() });
        }
        let r = direct_ratio(&cat1, &revenue, &values);
        lo = Some(match lo {
            Some(l) if l <= r => l,
            _ => r.clone(),
        });
        hi = Some(match hi {
            Some(h) if h >= r => h,
            _ => r,
        });
    }
    prop_assert_eq!(&fast.ratio_low, lo.as_ref().unwrap());
    prop_assert_eq!(&fast.ratio_high, hi.as_ref().unwrap());
    Ok(())
}

/// Every numeral quoted in the bundled ledger.
pub fn bundled_quotes() -> Vec<String> {
    germany_2021()
        .unwrap()
        .jurisdictions
        .iter()
        .flat_map(|j| j.positions.iter().map(|p| p.quoted_value.clone()))
        .collect()
}

fn strip_grouping(s: &str, locale: Locale) -> String {
    s.chars().filter(|c| *c != locale.group_separator()).collect()
}

pub fn check_quote_round_trip(quoted: &str) -> Result<(), TestCaseError> {
    let parsed = parse_locale_number(quoted, Locale::German).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let english = parse_locale_number(&swap_separators(quoted), Locale::English)
        .map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(parsed.to_ratio(), english.to_ratio());
    let formatted = format_locale_number(&parsed, Locale::German);
    if parsed.absent {
        prop_assert_eq!(formatted, "—");
    } else {
        prop_assert_eq!(
            strip_grouping(&formatted, Locale::German),
            strip_grouping(quoted.trim(), Locale::German)
        );
    }
    Ok(())
}

pub fn decimal_value() -> impl Strategy<Value = DecimalValue> {
    (-1_000_000_000_000_000i128..1_000_000_000_000_000, 0u32..=5).prop_map(|(m, d)| DecimalValue::new(m, d))
}

pub fn check_format_parse(v: &DecimalValue) -> Result<(), TestCaseError> {
    for locale in [Locale::German, Locale::English] {
        let text = format_locale_number(v, locale);
        let back = parse_locale_number(&text, locale).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(back.to_ratio(), v.to_ratio());
    }
    check_quote_round_trip(&format_locale_number(v, Locale::German))
}

pub fn check_permutation(ledgers: &[JurisdictionLedger], order: &[usize], reverse_positions: bool) -> Result<(), TestCaseError> {
    let base = compute_cat1(ledgers).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let mut shuffled: Vec<_> = order.iter().map(|&i| ledgers[i].clone()).collect();
    if reverse_positions {
        for l in &mut shuffled {
            l.positions.reverse();
        }
    }
    let permuted = compute_cat1(&shuffled).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(base.total, permuted.total);
    let by_id = |a: &adminratio_core::cat1::Cat1Aggregate| -> BTreeMap<String, Money> {
        a.per_jurisdiction.iter().map(|r| (r.jurisdiction_id.clone(), r.tax_admin_cost)).collect()
    };
    prop_assert_eq!(by_id(&base), by_id(&permuted));
    Ok(())
}

/// The ledgers with a random reordering of them.
pub fn permuted_ledgers() -> impl Strategy<Value = (Vec<JurisdictionLedger>, Vec<usize>, bool)> {
    ledgers(ALL_METHODS).prop_flat_map(|ls| {
        let n = ls.len();
        (Just(ls), Just((0..n).collect::<Vec<_>>()).prop_shuffle(), any::<bool>())
    })
}

/// The bundled ledgers in a random order.
pub fn permuted_bundled() -> impl Strategy<Value = (Vec<JurisdictionLedger>, Vec<usize>, bool)> {
    let ls = germany_2021().unwrap().jurisdictions;
    let n = ls.len();
    (Just(ls), Just((0..n).collect::<Vec<_>>()).prop_shuffle(), any::<bool>())
}
