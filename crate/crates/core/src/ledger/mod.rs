//! Budget-ledger and estimation-parameter datasets: types, file readers and
//! validation.

mod file;
mod params;
mod validate;

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{DomainError, DomainResult};
use crate::money::{money_sum, Money};
use crate::numfmt::DecimalValue;
use crate::ratio::ExactRatio;

pub use file::{read_ledger, LEDGER_HEADER};
pub use params::{read_parameters, ParameterKey};
pub use validate::validate_dataset;

/// Version of the ledger/parameter file schema understood by this crate.
pub const DATASET_SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScaleUnit {
    #[serde(rename = "eur")]
    Euro,
    #[serde(rename = "keur")]
    KiloEuro,
}

impl FromStr for ScaleUnit {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "eur" => Ok(ScaleUnit::Euro),
            "keur" => Ok(ScaleUnit::KiloEuro),
            _ => Err(()),
        }
    }
}

/// Converts a quoted value into cents. Thousand-euro values may carry up to
/// five fraction digits; euro values up to two.
pub fn apply_scale(value: &DecimalValue, scale: ScaleUnit) -> DomainResult<Money> {
    let cent_digits = match scale {
        ScaleUnit::Euro => 2,
        ScaleUnit::KiloEuro => 5,
    };
    let cents = value.rescaled(cent_digits).ok_or_else(|| {
        if value.decimals > cent_digits {
            DomainError::SubCent {
                value: value.to_ratio().to_exact_string(),
            }
        } else {
            DomainError::Overflow {
                limit: Money::MAX_ABS_CENTS,
            }
        }
    })?;
    let cents: i64 = cents.try_into().map_err(|_| DomainError::Overflow {
        limit: Money::MAX_ABS_CENTS,
    })?;
    Money::from_cents(cents)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum QualityGrade {
    #[serde(rename = "g")]
    Good,
    #[serde(rename = "m")]
    Moderate,
    #[serde(rename = "p")]
    Poor,
}

impl QualityGrade {
    pub fn code(self) -> &'static str {
        match self {
            QualityGrade::Good => "g",
            QualityGrade::Moderate => "m",
            QualityGrade::Poor => "p",
        }
    }
}

impl FromStr for QualityGrade {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "g" => Ok(QualityGrade::Good),
            "m" => Ok(QualityGrade::Moderate),
            "p" => Ok(QualityGrade::Poor),
            _ => Err(()),
        }
    }
}

/// Page reference inside a source document. `Derived` marks values that are
/// reconstructed rather than transcribed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourcePage {
    Unspecified,
    Page(u32),
    Derived,
}

impl fmt::Display for SourcePage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SourcePage::Unspecified => Ok(()),
            SourcePage::Page(p) => write!(f, "p. {p}"),
            SourcePage::Derived => f.write_str("derived"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SourceRef {
    pub document_id: String,
    pub page: SourcePage,
    pub year: Option<u16>,
}

impl SourceRef {
    /// Builds a reference, taking the year from the first four-digit token of
    /// the document id (`"Thüringen 2022, Band 1"` → 2022).
    pub fn new(document_id: impl Into<String>, page: SourcePage) -> Self {
        let document_id = document_id.into();
        let year = document_id
            .split(|c: char| !c.is_ascii_digit())
            .find(|t| t.len() == 4)
            .and_then(|t| t.parse().ok());
        SourceRef {
            document_id,
            page,
            year,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Classification {
    #[serde(rename = "ministry_total")]
    MinistryTotal,
    #[serde(rename = "non_tax")]
    NonTaxAdmin,
    #[serde(rename = "pure_tax")]
    PureTaxAdmin,
    #[serde(rename = "neutral")]
    Neutral,
}

impl Classification {
    pub fn code(self) -> &'static str {
        match self {
            Classification::MinistryTotal => "ministry_total",
            Classification::NonTaxAdmin => "non_tax",
            Classification::PureTaxAdmin => "pure_tax",
            Classification::Neutral => "neutral",
        }
    }
}

impl FromStr for Classification {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "ministry_total" => Ok(Classification::MinistryTotal),
            "non_tax" => Ok(Classification::NonTaxAdmin),
            "pure_tax" => Ok(Classification::PureTaxAdmin),
            "neutral" => Ok(Classification::Neutral),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetPosition {
    pub code: String,
    pub name_original: String,
    pub name_en: String,
    /// The numeral exactly as printed in the source, German formatting.
    pub quoted_value: String,
    pub scale: ScaleUnit,
    pub absent: bool,
    pub amount: Money,
    pub classification: Classification,
    pub source: SourceRef,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AggregationMethod {
    /// Ministry total minus everything not used for tax administration.
    Subtractive,
    /// Sum of positions used purely for tax administration.
    Additive,
    /// Pure tax positions plus a proportional share of neutral positions.
    Allocative,
}

impl AggregationMethod {
    pub fn code(self) -> &'static str {
        match self {
            AggregationMethod::Subtractive => "subtractive",
            AggregationMethod::Additive => "additive",
            AggregationMethod::Allocative => "allocative",
        }
    }
}

impl FromStr for AggregationMethod {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "subtractive" => Ok(AggregationMethod::Subtractive),
            "additive" => Ok(AggregationMethod::Additive),
            "allocative" => Ok(AggregationMethod::Allocative),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JurisdictionLedger {
    pub id: String,
    pub name_en: String,
    pub population: u64,
    pub positions: Vec<BudgetPosition>,
    pub method: AggregationMethod,
    pub source: SourceRef,
}

impl JurisdictionLedger {
    pub fn positions_of(&self, class: Classification) -> impl Iterator<Item = &BudgetPosition> {
        self.positions
            .iter()
            .filter(move |p| p.classification == class)
    }

    pub fn sum_of(&self, class: Classification) -> DomainResult<Money> {
        let amounts: Vec<Money> = self.positions_of(class).map(|p| p.amount).collect();
        money_sum(&amounts)
    }

    pub fn ministry_total(&self) -> Option<Money> {
        self.positions_of(Classification::MinistryTotal)
            .next()
            .map(|p| p.amount)
    }

    /// True when any position is reconstructed instead of transcribed.
    pub fn reconstructed(&self) -> bool {
        self.positions
            .iter()
            .any(|p| p.source.page == SourcePage::Derived)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimationParameters {
    pub adviser_count: u64,
    /// Average revenue per chamber member, as printed (rounded).
    pub revenue_per_adviser_primary: Money,
    pub revenue_per_adviser_base2017: Money,
    pub cpi_start: ExactRatio,
    pub cpi_end: ExactRatio,
    pub outsourcing_rate: ExactRatio,
    /// Published primary subtotal (revenue × advisers) computed from the
    /// unrounded average. When present it defines the primary scenario.
    pub primary_subtotal_cat2: Option<Money>,
    pub grades: BTreeMap<String, QualityGrade>,
    /// Cited source document per parameter key, where given.
    pub sources: BTreeMap<String, String>,
}

impl EstimationParameters {
    /// Per-adviser revenue that the primary scenario uses: the unrounded
    /// average implied by the published subtotal, or the printed value.
    pub fn effective_revenue_per_adviser_primary(&self) -> DomainResult<ExactRatio> {
        match self.primary_subtotal_cat2 {
            Some(subtotal) if self.adviser_count > 0 => subtotal
                .to_ratio()
                .checked_div(&ExactRatio::from_integer(self.adviser_count as i64)),
            Some(_) => Err(DomainError::NotPositive {
                name: "adviser_count",
                value: "0".into(),
            }),
            None => Ok(self.revenue_per_adviser_primary.to_ratio()),
        }
    }

    pub fn grade(&self, key: ParameterKey) -> Option<QualityGrade> {
        self.grades.get(key.as_str()).copied()
    }

    pub fn source(&self, key: ParameterKey) -> Option<&str> {
        self.sources.get(key.as_str()).map(String::as_str)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RevenueFigures {
    pub total_all_taxes: Money,
    pub municipal_other_taxes: Money,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dataset {
    pub jurisdictions: Vec<JurisdictionLedger>,
    pub parameters: EstimationParameters,
    pub revenue: RevenueFigures,
}

/// One rule broken by a dataset. Violations are data, collected in full.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: String,
    pub jurisdiction: Option<String>,
    pub position: Option<String>,
    pub line: Option<u64>,
    pub message: String,
}

impl Violation {
    pub fn new(rule: &str, message: impl Into<String>) -> Self {
        Violation {
            rule: rule.to_owned(),
            jurisdiction: None,
            position: None,
            line: None,
            message: message.into(),
        }
    }

    pub fn in_jurisdiction(mut self, id: &str) -> Self {
        self.jurisdiction = Some(id.to_owned());
        self
    }

    pub fn at_position(mut self, code: &str) -> Self {
        self.position = Some(code.to_owned());
        self
    }

    pub fn at_line(mut self, line: u64) -> Self {
        self.line = Some(line);
        self
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.rule)?;
        if let Some(line) = self.line {
            write!(f, " line {line}")?;
        }
        if let Some(j) = &self.jurisdiction {
            write!(f, " jurisdiction {j}")?;
        }
        if let Some(p) = &self.position {
            write!(f, " position {p}")?;
        }
        write!(f, ": {}", self.message)
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("dataset is invalid ({} violation(s))", .0.len())]
    Invalid(Vec<Violation>),
}

/// Parses both files' contents and validates the result.
pub fn parse_dataset(ledger_text: &str, params_text: &str) -> Result<Dataset, LoadError> {
    let (jurisdictions, mut violations) = read_ledger(ledger_text)?;
    let (parsed, param_violations) = read_parameters(params_text);
    violations.extend(param_violations);
    let Some((parameters, revenue)) = parsed else {
        return Err(LoadError::Invalid(violations));
    };
    if !violations.is_empty() {
        return Err(LoadError::Invalid(violations));
    }
    let dataset = Dataset {
        jurisdictions,
        parameters,
        revenue,
    };
    let violations = validate_dataset(&dataset);
    if violations.is_empty() {
        Ok(dataset)
    } else {
        Err(LoadError::Invalid(violations))
    }
}

/// Reads, parses and validates a ledger file and a parameters file.
pub fn load_dataset(ledger_path: &Path, params_path: &Path) -> Result<Dataset, LoadError> {
    let read = |path: &Path| {
        std::fs::read_to_string(path).map_err(|source| LoadError::Io {
            path: path.to_owned(),
            source,
        })
    };
    let ledger_text = read(ledger_path)?;
    let params_text = read(params_path)?;
    parse_dataset(&ledger_text, &params_text)
}
