use std::collections::{HashMap, HashSet};

use crate::cat1::jurisdiction_cost;
use crate::error::DomainError;
use crate::numfmt::{parse_locale_number, Locale};
use crate::ratio::ExactRatio;

use super::{apply_scale, AggregationMethod, Classification, Dataset, Violation};

/// Checks every dataset invariant and returns all violations found.
pub fn validate_dataset(dataset: &Dataset) -> Vec<Violation> {
    let mut out = Vec::new();

    if dataset.jurisdictions.is_empty() {
        out.push(Violation::new("no-jurisdictions", "no jurisdictions"));
    }

    let mut seen: HashMap<&str, usize> = HashMap::new();
    for (idx, ledger) in dataset.jurisdictions.iter().enumerate() {
        let id = ledger.id.as_str();
        let v = |rule: &str, msg: String| Violation::new(rule, msg).in_jurisdiction(id);

        if let Some(first) = seen.insert(id, idx) {
            out.push(v(
                "duplicate-jurisdiction",
                format!("jurisdiction id {id:?} appears in blocks {} and {}", first + 1, idx + 1),
            ));
        }
        if ledger.population == 0 {
            out.push(v("population-not-positive", "population must be positive".into()));
        }
        if ledger.source.document_id.trim().is_empty() {
            out.push(v("missing-source", "jurisdiction source document is empty".into()));
        }

        let mut codes = HashSet::new();
        for p in &ledger.positions {
            if !codes.insert(p.code.as_str()) {
                out.push(
                    v("duplicate-position-code", format!("position code {:?} repeats", p.code))
                        .at_position(&p.code),
                );
            }
            if p.source.document_id.trim().is_empty() {
                out.push(v("missing-source", "source document is empty".into()).at_position(&p.code));
            }
            let reparsed = parse_locale_number(&p.quoted_value, Locale::German)
                .ok()
                .and_then(|d| apply_scale(&d, p.scale).ok().map(|m| (m, d.absent)));
            if reparsed != Some((p.amount, p.absent)) {
                out.push(
                    v(
                        "amount-mismatch",
                        format!("amount {} does not match quoted value {:?}", p.amount, p.quoted_value),
                    )
                    .at_position(&p.code),
                );
            }
        }

        let count = |c| ledger.positions_of(c).count();
        let totals = count(Classification::MinistryTotal);
        if totals > 1 {
            out.push(v("multiple-ministry-total", format!("{totals} ministry-total positions")));
        }
        let mut method_ok = totals <= 1;
        match ledger.method {
            AggregationMethod::Subtractive if totals == 0 => {
                out.push(v("missing-ministry-total", "subtractive ledger has no ministry total".into()));
                method_ok = false;
            }
            AggregationMethod::Additive | AggregationMethod::Allocative
                if count(Classification::PureTaxAdmin) == 0 =>
            {
                out.push(v("missing-pure-tax", "ledger has no pure tax position".into()));
                method_ok = false;
            }
            _ => {}
        }
        if ledger.method == AggregationMethod::Allocative && count(Classification::NonTaxAdmin) == 0 {
            out.push(v("missing-non-tax", "allocative ledger has no non-tax position".into()));
            method_ok = false;
        }

        if method_ok && ledger.population > 0 {
            match jurisdiction_cost(ledger) {
                Ok(r) if r.tax_admin_cost.is_negative() => out.push(v(
                    "negative-tax-admin-cost",
                    format!("tax administrative cost {} is negative", r.tax_admin_cost),
                )),
                Ok(_) => {}
                Err(DomainError::UndefinedAllocation) => out.push(v(
                    "allocation-undefined",
                    "pure tax and pure non-tax sums are both zero".into(),
                )),
                Err(e @ DomainError::NegativeAllocationInput { .. }) => {
                    out.push(v("negative-allocation-input", e.to_string()))
                }
                Err(e) => out.push(v("cost-not-computable", e.to_string())),
            }
        }
    }

    let p = &dataset.parameters;
    let param = |rule: &str, msg: String| Violation::new(rule, msg);
    if p.adviser_count == 0 {
        out.push(param("adviser-count-not-positive", "adviser_count must be positive".into()));
    }
    if p.revenue_per_adviser_primary.cents() <= 0 {
        out.push(param(
            "revenue-not-positive",
            "revenue_per_adviser_primary_eur must be positive".into(),
        ));
    }
    if p.revenue_per_adviser_base2017.cents() <= 0 {
        out.push(param(
            "revenue-not-positive",
            "revenue_per_adviser_2017_eur must be positive".into(),
        ));
    }
    if !p.cpi_start.is_positive() {
        out.push(param("cpi-not-positive", format!("cpi_start = {} must be positive", p.cpi_start)));
    }
    if !p.cpi_end.is_positive() {
        out.push(param("cpi-not-positive", format!("cpi_end = {} must be positive", p.cpi_end)));
    }
    if !p.outsourcing_rate.is_positive() || p.outsourcing_rate > ExactRatio::one() {
        out.push(param(
            "rate-out-of-domain",
            format!("outsourcing_rate = {} must lie in (0, 1]", p.outsourcing_rate),
        ));
    }
    if let Some(subtotal) = p.primary_subtotal_cat2 {
        if subtotal.cents() <= 0 {
            out.push(param("revenue-not-positive", "subtotal_cat2_primary_eur must be positive".into()));
        } else if p.adviser_count > 0 {
            // The subtotal's implied average must round to the printed average.
            let implied = p.effective_revenue_per_adviser_primary().expect("count checked");
            let gap = (implied - p.revenue_per_adviser_primary.to_ratio()).abs();
            if gap > ExactRatio::new(1, 2).expect("constant") {
                out.push(param(
                    "subtotal-inconsistent",
                    format!(
                        "subtotal_cat2_primary_eur / adviser_count differs from revenue_per_adviser_primary_eur by {}",
                        gap
                    ),
                ));
            }
        }
    }

    let r = &dataset.revenue;
    if r.municipal_other_taxes.is_negative() || r.total_all_taxes < r.municipal_other_taxes {
        out.push(param(
            "revenue-inconsistent",
            "requires total_tax_revenue_meur >= municipal_other_taxes_meur >= 0".into(),
        ));
    }
    out
}
