//! Government-side tax administrative cost (category 1).

use std::collections::HashSet;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{DomainError, DomainResult};
use crate::ledger::{AggregationMethod, Classification, JurisdictionLedger};
use crate::money::{money_sum, ratio_of, Money};
use crate::ratio::{ExactRatio, RoundingMode};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JurisdictionResult {
    pub jurisdiction_id: String,
    pub tax_admin_cost: Money,
    /// Cost as a fraction of the ministry total (or of all classified
    /// positions when the ledger has no total).
    pub ministry_share: ExactRatio,
    /// Euros per inhabitant per year.
    pub per_capita: ExactRatio,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cat1Aggregate {
    pub per_jurisdiction: Vec<JurisdictionResult>,
    pub total: Money,
}

/// Pure tax cost plus the neutral mass apportioned by the ratio
/// `pure_tax / (pure_tax + pure_non_tax)`, rounded once to the cent.
pub fn allocate_neutral(pure_tax: Money, pure_non_tax: Money, neutral: Money) -> DomainResult<Money> {
    for (name, m) in [
        ("pure_tax", pure_tax),
        ("pure_non_tax", pure_non_tax),
        ("neutral", neutral),
    ] {
        if m.is_negative() {
            return Err(DomainError::NegativeAllocationInput { name });
        }
    }
    let pure_total = pure_tax.checked_add(pure_non_tax)?;
    if pure_total.is_zero() {
        return Err(DomainError::UndefinedAllocation);
    }
    let share = ratio_of(pure_tax, pure_total)?;
    let allocated = Money::from_ratio(&(neutral.to_ratio() * share), RoundingMode::HalfUp)?;
    pure_tax.checked_add(allocated)
}

pub fn per_capita(cost: Money, population: u64) -> DomainResult<ExactRatio> {
    if population == 0 {
        return Err(DomainError::ZeroDenominator {
            context: "per-capita population",
        });
    }
    cost.to_ratio()
        .checked_div(&ExactRatio::from_bigints(BigInt::from(population), BigInt::from(1))?)
}

fn mismatch(ledger: &JurisdictionLedger, reason: &'static str) -> DomainError {
    DomainError::MethodMismatch {
        jurisdiction: ledger.id.clone(),
        reason,
    }
}

/// Tax administrative cost of one government, dispatched on its
/// aggregation method.
pub fn jurisdiction_cost(ledger: &JurisdictionLedger) -> DomainResult<JurisdictionResult> {
    let totals = ledger.positions_of(Classification::MinistryTotal).count();
    if totals > 1 {
        return Err(mismatch(ledger, "more than one ministry total"));
    }
    let ministry_total = ledger.ministry_total();
    let non_tax = ledger.sum_of(Classification::NonTaxAdmin)?;
    let pure_tax = ledger.sum_of(Classification::PureTaxAdmin)?;
    let neutral = ledger.sum_of(Classification::Neutral)?;
    let has = |c| ledger.positions_of(c).next().is_some();

    let cost = match ledger.method {
        AggregationMethod::Subtractive => {
            let total = ministry_total.ok_or_else(|| mismatch(ledger, "subtractive method needs a ministry total"))?;
            total.checked_sub(non_tax)?
        }
        AggregationMethod::Additive => {
            if !has(Classification::PureTaxAdmin) {
                return Err(mismatch(ledger, "additive method needs a pure tax position"));
            }
            pure_tax
        }
        AggregationMethod::Allocative => {
            if !has(Classification::PureTaxAdmin) || !has(Classification::NonTaxAdmin) {
                return Err(mismatch(ledger, "allocative method needs pure tax and non-tax positions"));
            }
            allocate_neutral(pure_tax, non_tax, neutral)?
        }
    };

    let share_base = match ministry_total {
        Some(total) => total,
        None => {
            let all: Vec<Money> = ledger.positions.iter().map(|p| p.amount).collect();
            money_sum(&all)?
        }
    };
    Ok(JurisdictionResult {
        jurisdiction_id: ledger.id.clone(),
        tax_admin_cost: cost,
        ministry_share: ratio_of(cost, share_base)?,
        per_capita: per_capita(cost, ledger.population)?,
    })
}

pub fn aggregate_cat1(results: Vec<JurisdictionResult>) -> DomainResult<Cat1Aggregate> {
    let mut seen = HashSet::new();
    for r in &results {
        if !seen.insert(r.jurisdiction_id.as_str()) {
            return Err(DomainError::DuplicateJurisdiction(r.jurisdiction_id.clone()));
        }
    }
    let costs: Vec<Money> = results.iter().map(|r| r.tax_admin_cost).collect();
    let total = money_sum(&costs)?;
    Ok(Cat1Aggregate {
        per_jurisdiction: results,
        total,
    })
}

/// Computes every jurisdiction and folds them into the category total.
pub fn compute_cat1(ledgers: &[JurisdictionLedger]) -> DomainResult<Cat1Aggregate> {
    let results = ledgers
        .iter()
        .map(jurisdiction_cost)
        .collect::<DomainResult<Vec<_>>>()?;
    aggregate_cat1(results)
}
