//! The end-to-end estimation pipeline: ledgers and parameters in, results out.

use serde::{Deserialize, Serialize};

use crate::cat1::{compute_cat1, Cat1Aggregate};
use crate::error::DomainResult;
use crate::ledger::{Dataset, JurisdictionLedger, RevenueFigures};
use crate::results::{build_results, ResultsTable};
use crate::taxpayer::{compute_cat23, Cat23Summary, TaxpayerInputs};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelInputs {
    pub ledgers: Vec<JurisdictionLedger>,
    pub taxpayer: TaxpayerInputs,
    pub revenue: RevenueFigures,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evaluation {
    pub cat1: Cat1Aggregate,
    pub cat23: Cat23Summary,
    pub results: ResultsTable,
}

impl ModelInputs {
    pub fn from_dataset(dataset: &Dataset) -> DomainResult<Self> {
        Ok(ModelInputs {
            ledgers: dataset.jurisdictions.clone(),
            taxpayer: TaxpayerInputs::from_parameters(&dataset.parameters)?,
            revenue: dataset.revenue,
        })
    }

    pub fn evaluate(&self) -> DomainResult<Evaluation> {
        let cat1 = compute_cat1(&self.ledgers)?;
        let cat23 = compute_cat23(&self.taxpayer)?;
        let results = build_results(&cat1, &cat23, &self.revenue)?;
        Ok(Evaluation {
            cat1,
            cat23,
            results,
        })
    }
}
