//! Report assembly: the two tables and the results block, rendered for people
//! ([`render_text`]) and for machines ([`emit_machine`]).
//!
//! A [`ReportBundle`] carries every exact value next to the rounded string a
//! reader sees, so both renderings print the same digits. The structured
//! layout is described in `docs/report-schema.md`.

mod machine;
mod text;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::ledger::{
    AggregationMethod, Dataset, ParameterKey, QualityGrade, SourceRef, DATASET_SCHEMA_VERSION,
};
use crate::model::Evaluation;
use crate::money::Money;
use crate::ratio::{render_rounded, ExactRatio, RoundingMode};
use crate::results::ResultsTable;

pub use machine::{emit_machine, parse_structured, write_outputs, MachineFormat, OutputFile, ReportError};
pub use text::render_text;

/// Version of the machine-readable report layout.
pub const REPORT_SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table1Row {
    pub jurisdiction_id: String,
    pub name_en: String,
    pub method: AggregationMethod,
    pub population: u64,
    pub tax_admin_cost: Money,
    pub ministry_share: ExactRatio,
    pub per_capita: ExactRatio,
    pub source: SourceRef,
    /// True when any figure was derived rather than transcribed.
    pub reconstructed: bool,
    /// Share of the ministry budget in percent, two decimals.
    pub ministry_share_pct: String,
    /// Euro per citizen, two decimals.
    pub per_capita_display: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table2Row {
    pub key: String,
    pub description: String,
    pub value: ExactRatio,
    pub display: String,
    pub grade: Option<QualityGrade>,
    pub source: Option<String>,
    pub derived: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultsSection {
    #[serde(flatten)]
    pub values: ResultsTable,
    /// Whole-euro renderings keyed by field name.
    pub display: BTreeMap<String, String>,
    pub ratio_excl_municipal_pct: String,
    pub ratio_incl_municipal_pct: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvenanceEntry {
    pub document_id: String,
    pub year: Option<u16>,
    /// Jurisdiction ids and parameter keys citing this document.
    pub used_by: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub schema_version: String,
    pub dataset_schema_version: String,
    pub table1: Vec<Table1Row>,
    pub cat1_total: Money,
    pub table2: Vec<Table2Row>,
    pub results: ResultsSection,
    pub provenance: Vec<ProvenanceEntry>,
}

fn half_up(x: &ExactRatio, decimals: u32) -> String {
    render_rounded(x, decimals, RoundingMode::HalfUp)
}

/// Fields of the results block in print order, with their labels. The
/// headline ratio comes last.
pub(crate) const RESULT_LINES: [(&str, &str); 12] = [
    ("ttrnotabm", "Total tax revenue net of taxes administered by municipalities (Ttrnotabm)"),
    ("cat1", "Cat1, government"),
    ("cat2_primary", "Cat2, primary"),
    ("cat3_primary", "Cat3, primary"),
    ("cat23_primary", "Cat2+3, primary"),
    ("cat2_alternative", "Cat2, alternative"),
    ("cat3_alternative", "Cat3, alternative"),
    ("cat23_alternative", "Cat2+3, alternative"),
    ("cat23_mean", "Cat2+3, mean"),
    ("total_cost", "Total tax administrative cost (Cat1 + mean Cat2+3)"),
    ("ratio_incl_municipal", "Ratio including taxes administered by municipalities"),
    ("ratio_excl_municipal", "Total tax administrative cost / Ttrnotabm"),
];

/// Exact value of a results field by name.
pub(crate) fn result_value(t: &ResultsTable, key: &str) -> ExactRatio {
    match key {
        "ttrnotabm" => t.ttrnotabm.to_ratio(),
        "cat1" => t.cat1.to_ratio(),
        "cat2_primary" => t.cat2_primary.clone(),
        "cat3_primary" => t.cat3_primary.clone(),
        "cat23_primary" => t.cat23_primary.clone(),
        "cat2_alternative" => t.cat2_alternative.clone(),
        "cat3_alternative" => t.cat3_alternative.clone(),
        "cat23_alternative" => t.cat23_alternative.clone(),
        "cat23_mean" => t.cat23_mean.clone(),
        "total_cost" => t.total_cost.clone(),
        "ratio_incl_municipal" => t.ratio_incl_municipal.clone(),
        "ratio_excl_municipal" => t.ratio_excl_municipal.clone(),
        other => unreachable!("unknown results field {other}"),
    }
}

impl ResultsSection {
    pub fn new(values: ResultsTable) -> Self {
        let display = RESULT_LINES
            .iter()
            .filter(|(key, _)| !key.starts_with("ratio_"))
            .map(|(key, _)| (key.to_string(), half_up(&result_value(&values, key), 0)))
            .collect();
        ResultsSection {
            ratio_excl_municipal_pct: half_up(&values.ratio_excl_municipal.percent(), 2),
            ratio_incl_municipal_pct: half_up(&values.ratio_incl_municipal.percent(), 2),
            display,
            values,
        }
    }

    /// The rounded string a reader sees for a results field.
    pub fn rendered(&self, key: &str) -> &str {
        match key {
            "ratio_excl_municipal" => &self.ratio_excl_municipal_pct,
            "ratio_incl_municipal" => &self.ratio_incl_municipal_pct,
            other => &self.display[other],
        }
    }
}

fn table2(dataset: &Dataset, evaluation: &Evaluation) -> Vec<Table2Row> {
    let p = &dataset.parameters;
    let cat23 = &evaluation.cat23;
    let given = |key: ParameterKey, description: &str, value: ExactRatio, decimals: u32| Table2Row {
        key: key.as_str().to_owned(),
        description: description.to_owned(),
        display: half_up(&value, decimals),
        value,
        grade: p.grade(key),
        source: p.source(key).map(str::to_owned),
        derived: false,
    };
    let derived = |key: &str, description: &str, value: ExactRatio, decimals: u32| Table2Row {
        key: key.to_owned(),
        description: description.to_owned(),
        display: half_up(&value, decimals),
        value,
        grade: None,
        source: None,
        derived: true,
    };

    let cat2_primary = match p.primary_subtotal_cat2 {
        Some(subtotal) => given(
            ParameterKey::PrimarySubtotalCat2,
            "Subtotal Cat2, primary (€)",
            subtotal.to_ratio(),
            0,
        ),
        None => derived("cat2_primary", "Subtotal Cat2, primary (€)", cat23.primary.cat2.clone(), 0),
    };

    vec![
        given(
            ParameterKey::RevenuePerAdviserPrimary,
            "Average revenue per tax adviser (€)",
            p.revenue_per_adviser_primary.to_ratio(),
            0,
        ),
        given(
            ParameterKey::AdviserCount,
            "Members of the chamber of tax advisers",
            ExactRatio::from_integer(p.adviser_count as i64),
            0,
        ),
        cat2_primary,
        given(
            ParameterKey::RevenuePerAdviser2017,
            "Revenue per adviser with sole office, 2017 (€)",
            p.revenue_per_adviser_base2017.to_ratio(),
            0,
        ),
        given(ParameterKey::CpiStart, "Consumer price index, start", p.cpi_start.clone(), 1),
        given(ParameterKey::CpiEnd, "Consumer price index, end", p.cpi_end.clone(), 1),
        derived("inflation_multiplier", "Inflation multiplier", cat23.inflation_multiplier.clone(), 6),
        derived(
            "revenue_per_adviser_adjusted",
            "2017 revenue adjusted for inflation (€)",
            cat23.alternative.revenue_per_adviser.clone(),
            0,
        ),
        derived("cat2_alternative", "Subtotal Cat2, alternative (€)", cat23.alternative.cat2.clone(), 0),
        given(
            ParameterKey::OutsourcingRate,
            "Share of taxpayers who outsource",
            p.outsourcing_rate.clone(),
            2,
        ),
        derived("cat23_primary", "Total Cat2+3, primary (€)", cat23.primary.cat23_total.clone(), 0),
        derived(
            "cat23_alternative",
            "Total Cat2+3, alternative (€)",
            cat23.alternative.cat23_total.clone(),
            0,
        ),
        derived("cat23_mean", "Mean Cat2+3 (€)", cat23.mean.clone(), 0),
    ]
}

fn provenance(dataset: &Dataset, table2: &[Table2Row]) -> Vec<ProvenanceEntry> {
    let mut docs: BTreeMap<String, (Option<u16>, Vec<String>)> = BTreeMap::new();
    let mut cite = |source: &SourceRef, user: &str| {
        let entry = docs
            .entry(source.document_id.clone())
            .or_insert_with(|| (source.year, Vec::new()));
        if !entry.1.iter().any(|u| u == user) {
            entry.1.push(user.to_owned());
        }
    };
    for ledger in &dataset.jurisdictions {
        for position in &ledger.positions {
            cite(&position.source, &ledger.id);
        }
    }
    for row in table2 {
        if let Some(doc) = &row.source {
            cite(&SourceRef::new(doc.clone(), crate::ledger::SourcePage::Unspecified), &row.key);
        }
    }
    docs.into_iter()
        .map(|(document_id, (year, used_by))| ProvenanceEntry {
            document_id,
            year,
            used_by,
        })
        .collect()
}

/// Assembles the report for an evaluated dataset. Table 1 keeps the ledger's
/// jurisdiction order.
pub fn build_bundle(dataset: &Dataset, evaluation: &Evaluation) -> ReportBundle {
    let table1 = dataset
        .jurisdictions
        .iter()
        .zip(&evaluation.cat1.per_jurisdiction)
        .map(|(ledger, result)| {
            debug_assert_eq!(ledger.id, result.jurisdiction_id);
            Table1Row {
                jurisdiction_id: ledger.id.clone(),
                name_en: ledger.name_en.clone(),
                method: ledger.method,
                population: ledger.population,
                tax_admin_cost: result.tax_admin_cost,
                ministry_share_pct: half_up(&result.ministry_share.percent(), 2),
                per_capita_display: half_up(&result.per_capita, 2),
                ministry_share: result.ministry_share.clone(),
                per_capita: result.per_capita.clone(),
                source: ledger.source.clone(),
                reconstructed: ledger.reconstructed(),
            }
        })
        .collect();
    let table2 = table2(dataset, evaluation);
    let provenance = provenance(dataset, &table2);
    ReportBundle {
        schema_version: REPORT_SCHEMA_VERSION.to_owned(),
        dataset_schema_version: DATASET_SCHEMA_VERSION.to_owned(),
        table1,
        cat1_total: evaluation.cat1.total,
        table2,
        results: ResultsSection::new(evaluation.results.clone()),
        provenance,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled::germany_2021;
    use crate::model::ModelInputs;

    pub(super) fn bundle() -> ReportBundle {
        let dataset = germany_2021().unwrap();
        let evaluation = ModelInputs::from_dataset(&dataset).unwrap().evaluate().unwrap();
        build_bundle(&dataset, &evaluation)
    }

    #[test]
    fn headline_and_displays() {
        let b = bundle();
        assert_eq!(b.results.ratio_excl_municipal_pct, "20.23");
        assert_eq!(b.results.ratio_incl_municipal_pct, "20.20");
        assert_eq!(b.results.rendered("cat1"), "17667088104");
        assert_eq!(b.results.rendered("cat23_mean"), "150635931206");
        assert_eq!(b.table1[0].ministry_share_pct, "67.04");
        assert_eq!(b.table1[0].per_capita_display, "67.85");
    }

    #[test]
    fn table2_rows() {
        let b = bundle();
        let row = |k: &str| b.table2.iter().find(|r| r.key == k).unwrap();
        assert_eq!(row("inflation_multiplier").display, "1.082846");
        assert!(row("inflation_multiplier").derived);
        assert_eq!(row("revenue_per_adviser_adjusted").display, "359505");
        assert_eq!(row("subtotal_cat2_primary_eur").display, "48332295152");
        assert_eq!(row("outsourcing_rate").grade, Some(QualityGrade::Moderate));
        assert_eq!(row("cat23_alternative").display, "128656522584");
    }

    #[test]
    fn only_bremen_is_reconstructed() {
        let b = bundle();
        let flagged: Vec<_> = b.table1.iter().filter(|r| r.reconstructed).map(|r| r.jurisdiction_id.as_str()).collect();
        assert_eq!(flagged, ["hb"]);
    }

    #[test]
    fn provenance_lists_every_document_once() {
        let b = bundle();
        let ids: Vec<_> = b.provenance.iter().map(|p| p.document_id.as_str()).collect();
        let mut sorted = ids.clone();
        sorted.dedup();
        assert_eq!(ids, sorted);
        assert!(b.provenance.iter().any(|p| p.used_by.contains(&"outsourcing_rate".to_owned())));
    }
}
