//! Headline figures: net revenue, total cost and the two cost ratios.

use serde::{Deserialize, Serialize};

use crate::cat1::Cat1Aggregate;
use crate::error::{DomainError, DomainResult};
use crate::ledger::RevenueFigures;
use crate::money::Money;
use crate::ratio::ExactRatio;
use crate::taxpayer::Cat23Summary;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultsTable {
    /// Total tax revenue net of taxes administered by municipalities.
    pub ttrnotabm: Money,
    pub cat1: Money,
    pub cat2_primary: ExactRatio,
    pub cat2_alternative: ExactRatio,
    pub cat3_primary: ExactRatio,
    pub cat3_alternative: ExactRatio,
    pub cat23_primary: ExactRatio,
    pub cat23_alternative: ExactRatio,
    pub cat23_mean: ExactRatio,
    pub total_cost: ExactRatio,
    pub ratio_excl_municipal: ExactRatio,
    pub ratio_incl_municipal: ExactRatio,
}

pub fn net_tax_revenue(total_all: Money, municipal_other: Money) -> DomainResult<Money> {
    if municipal_other.is_negative() {
        return Err(DomainError::NotPositive {
            name: "municipal_other_taxes",
            value: municipal_other.to_plain_string(),
        });
    }
    let net = total_all.checked_sub(municipal_other)?;
    if net.is_negative() {
        return Err(DomainError::NegativeRevenue);
    }
    Ok(net)
}

pub fn total_admin_cost(cat1: Money, cat23_mean: &ExactRatio) -> DomainResult<ExactRatio> {
    if cat1.is_negative() || cat23_mean.is_negative() {
        return Err(DomainError::NotPositive {
            name: "cost component",
            value: if cat1.is_negative() {
                cat1.to_plain_string()
            } else {
                cat23_mean.to_exact_string()
            },
        });
    }
    Ok(cat1.to_ratio() + cat23_mean)
}

pub fn admin_cost_ratio(total_cost: &ExactRatio, revenue: Money) -> DomainResult<ExactRatio> {
    if revenue.cents() <= 0 {
        return Err(DomainError::NotPositive {
            name: "tax revenue",
            value: revenue.to_plain_string(),
        });
    }
    total_cost.checked_div(&revenue.to_ratio())
}

pub fn build_results(
    cat1: &Cat1Aggregate,
    cat23: &Cat23Summary,
    revenue: &RevenueFigures,
) -> DomainResult<ResultsTable> {
    let ttrnotabm = net_tax_revenue(revenue.total_all_taxes, revenue.municipal_other_taxes)?;
    let total_cost = total_admin_cost(cat1.total, &cat23.mean)?;
    Ok(ResultsTable {
        ttrnotabm,
        cat1: cat1.total,
        cat2_primary: cat23.primary.cat2.clone(),
        cat2_alternative: cat23.alternative.cat2.clone(),
        cat3_primary: cat23.primary.cat3.clone(),
        cat3_alternative: cat23.alternative.cat3.clone(),
        cat23_primary: cat23.primary.cat23_total.clone(),
        cat23_alternative: cat23.alternative.cat23_total.clone(),
        cat23_mean: cat23.mean.clone(),
        ratio_excl_municipal: admin_cost_ratio(&total_cost, ttrnotabm)?,
        ratio_incl_municipal: admin_cost_ratio(&total_cost, revenue.total_all_taxes)?,
        total_cost,
    })
}
