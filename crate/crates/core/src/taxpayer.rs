//! Taxpayer-side cost: outsourced fees (category 2) and the hidden internal
//! effort of self-filers (category 3), grossed up by the outsourcing rate.

use serde::{Deserialize, Serialize};

use crate::error::{DomainError, DomainResult};
use crate::ledger::EstimationParameters;
use crate::ratio::ExactRatio;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioLabel {
    Primary,
    Alternative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cat23Scenario {
    pub label: ScenarioLabel,
    pub revenue_per_adviser: ExactRatio,
    pub cat2: ExactRatio,
    pub cat23_total: ExactRatio,
    pub cat3: ExactRatio,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cat23Summary {
    pub inflation_multiplier: ExactRatio,
    pub primary: Cat23Scenario,
    pub alternative: Cat23Scenario,
    pub mean: ExactRatio,
}

/// The numeric inputs of the taxpayer-side model, all exact.
///
/// `adviser_count` is rational so that sensitivity intervals (e.g. ±10 %)
/// need not land on whole persons.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaxpayerInputs {
    pub revenue_per_adviser_primary: ExactRatio,
    pub revenue_per_adviser_2017: ExactRatio,
    pub cpi_start: ExactRatio,
    pub cpi_end: ExactRatio,
    pub adviser_count: ExactRatio,
    pub outsourcing_rate: ExactRatio,
}

impl TaxpayerInputs {
    pub fn from_parameters(p: &EstimationParameters) -> DomainResult<Self> {
        Ok(TaxpayerInputs {
            revenue_per_adviser_primary: p.effective_revenue_per_adviser_primary()?,
            revenue_per_adviser_2017: p.revenue_per_adviser_base2017.to_ratio(),
            cpi_start: p.cpi_start.clone(),
            cpi_end: p.cpi_end.clone(),
            adviser_count: ExactRatio::from_integer(p.adviser_count as i64),
            outsourcing_rate: p.outsourcing_rate.clone(),
        })
    }
}

fn require_positive(name: &'static str, x: &ExactRatio) -> DomainResult<()> {
    if x.is_positive() {
        Ok(())
    } else {
        Err(DomainError::NotPositive {
            name,
            value: x.to_exact_string(),
        })
    }
}

fn require_rate(rate: &ExactRatio) -> DomainResult<()> {
    if rate.is_positive() && *rate <= ExactRatio::one() {
        Ok(())
    } else {
        Err(DomainError::OutOfDomain {
            name: "outsourcing_rate".into(),
            value: rate.to_exact_string(),
            domain: "(0, 1]",
        })
    }
}

/// `cpi_end / cpi_start`, kept unrounded.
pub fn inflation_multiplier(cpi_end: &ExactRatio, cpi_start: &ExactRatio) -> DomainResult<ExactRatio> {
    require_positive("cpi_end", cpi_end)?;
    require_positive("cpi_start", cpi_start)?;
    cpi_end.checked_div(cpi_start)
}

pub fn adjusted_revenue(base: &ExactRatio, multiplier: &ExactRatio) -> DomainResult<ExactRatio> {
    require_positive("inflation multiplier", multiplier)?;
    Ok(base * multiplier)
}

/// Total fees paid to advisers: revenue per adviser × number of advisers.
pub fn cat2_total(revenue_per_adviser: &ExactRatio, adviser_count: &ExactRatio) -> DomainResult<ExactRatio> {
    require_positive("revenue per adviser", revenue_per_adviser)?;
    require_positive("adviser_count", adviser_count)?;
    Ok(revenue_per_adviser * adviser_count)
}

/// Visible plus hidden taxpayer cost: `cat2 / rate`.
pub fn gross_up(cat2: &ExactRatio, outsourcing_rate: &ExactRatio) -> DomainResult<ExactRatio> {
    require_rate(outsourcing_rate)?;
    cat2.checked_div(outsourcing_rate)
}

/// Hidden cost of self-filers: `cat2 · (1 − rate) / rate`.
pub fn cat3_of(cat2: &ExactRatio, outsourcing_rate: &ExactRatio) -> DomainResult<ExactRatio> {
    require_rate(outsourcing_rate)?;
    (cat2 * &(ExactRatio::one() - outsourcing_rate)).checked_div(outsourcing_rate)
}

pub fn scenario_mean(a: &ExactRatio, b: &ExactRatio) -> ExactRatio {
    (a + b) * ExactRatio::new(1, 2).expect("constant")
}

fn scenario(label: ScenarioLabel, revenue: ExactRatio, inputs: &TaxpayerInputs) -> DomainResult<Cat23Scenario> {
    let cat2 = cat2_total(&revenue, &inputs.adviser_count)?;
    let cat23_total = gross_up(&cat2, &inputs.outsourcing_rate)?;
    let cat3 = cat3_of(&cat2, &inputs.outsourcing_rate)?;
    Ok(Cat23Scenario {
        label,
        revenue_per_adviser: revenue,
        cat2,
        cat23_total,
        cat3,
    })
}

/// Evaluates the primary (market survey) and alternative (inflation-adjusted
/// 2017 census) scenarios and their mean.
pub fn compute_cat23(inputs: &TaxpayerInputs) -> DomainResult<Cat23Summary> {
    let multiplier = inflation_multiplier(&inputs.cpi_end, &inputs.cpi_start)?;
    let adjusted = adjusted_revenue(&inputs.revenue_per_adviser_2017, &multiplier)?;
    let primary = scenario(ScenarioLabel::Primary, inputs.revenue_per_adviser_primary.clone(), inputs)?;
    let alternative = scenario(ScenarioLabel::Alternative, adjusted, inputs)?;
    let mean = scenario_mean(&primary.cat23_total, &alternative.cat23_total);
    Ok(Cat23Summary {
        inflation_multiplier: multiplier,
        primary,
        alternative,
        mean,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::{render_rounded, RoundingMode};

    fn r(n: i64, d: i64) -> ExactRatio {
        ExactRatio::new(n, d).unwrap()
    }

    fn whole(x: &ExactRatio) -> String {
        render_rounded(x, 0, RoundingMode::HalfUp)
    }

    #[test]
    fn multiplier() {
        let m = inflation_multiplier(&r(1111, 10), &r(1026, 10)).unwrap();
        assert_eq!(m, r(1111, 1026));
        assert_eq!(render_rounded(&m, 6, RoundingMode::HalfUp), "1.082846");
        let inv = inflation_multiplier(&r(1026, 10), &r(1111, 10)).unwrap();
        assert_eq!(render_rounded(&inv, 6, RoundingMode::HalfUp), "0.923492");
        assert_eq!(inflation_multiplier(&r(7, 1), &r(7, 1)).unwrap(), ExactRatio::one());
        assert!(inflation_multiplier(&r(0, 1), &r(1, 1)).is_err());
        assert!(inflation_multiplier(&r(1, 1), &r(-1, 1)).is_err());
    }

    #[test]
    fn adjusted_2017_revenue() {
        let m = r(1111, 1026);
        let adj = adjusted_revenue(&r(332_000, 1), &m).unwrap();
        assert_eq!(whole(&adj), "359505");
        assert_eq!(render_rounded(&adj, 2, RoundingMode::HalfUp), "359504.87");
        assert_eq!(render_rounded(&adjusted_revenue(&r(100, 1), &m).unwrap(), 2, RoundingMode::HalfUp), "108.28");
        assert_eq!(adjusted_revenue(&r(5, 1), &ExactRatio::one()).unwrap(), r(5, 1));
    }

    #[test]
    fn cat2_examples() {
        let adj = r(332_000, 1) * r(1111, 1026);
        assert_eq!(whole(&cat2_total(&adj, &r(100_204, 1)).unwrap()), "36023826324");
        assert_eq!(cat2_total(&r(482_339, 1), &r(100_204, 1)).unwrap(), r(48_332_297_156, 1));
        assert_eq!(cat2_total(&r(9, 1), &ExactRatio::one()).unwrap(), r(9, 1));
        assert!(cat2_total(&r(9, 1), &ExactRatio::zero()).is_err());
    }

    #[test]
    fn gross_up_and_cat3() {
        let rate = r(28, 100);
        let primary = r(48_332_295_152, 1);
        let total = gross_up(&primary, &rate).unwrap();
        assert_eq!(render_rounded(&total, 2, RoundingMode::HalfUp), "172615339828.57");
        assert_eq!(whole(&total), "172615339829");
        let cat3 = cat3_of(&primary, &rate).unwrap();
        assert_eq!(render_rounded(&cat3, 2, RoundingMode::HalfUp), "124283044676.57");

        let alt = r(36_023_826_324, 1);
        assert_eq!(render_rounded(&gross_up(&alt, &rate).unwrap(), 2, RoundingMode::HalfUp), "128656522585.71");
        assert_eq!(render_rounded(&cat3_of(&alt, &rate).unwrap(), 2, RoundingMode::HalfUp), "92632696261.71");

        assert_eq!(gross_up(&alt, &ExactRatio::one()).unwrap(), alt);
        assert_eq!(cat3_of(&alt, &ExactRatio::one()).unwrap(), ExactRatio::zero());
        for bad in [r(0, 1), r(-1, 10), r(11, 10)] {
            assert!(matches!(gross_up(&alt, &bad), Err(DomainError::OutOfDomain { .. })));
            assert!(cat3_of(&alt, &bad).is_err());
        }
    }

    #[test]
    fn mean_examples() {
        let m = scenario_mean(&r(172_615_339_828, 1), &r(128_656_522_584, 1));
        assert_eq!(m, r(150_635_931_206, 1));
        assert_eq!(scenario_mean(&r(3, 7), &r(3, 7)), r(3, 7));
        assert_eq!(scenario_mean(&ExactRatio::zero(), &r(10, 1)), r(5, 1));
    }
}
