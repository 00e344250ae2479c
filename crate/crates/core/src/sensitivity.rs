//! Deterministic sensitivity analysis of the headline ratio (cost over
//! revenue net of municipal taxes): one-at-a-time sweeps, interval bounds
//! and tornado rankings.
//!
//! Every reported ratio is a full re-evaluation of the pipeline. Interval
//! bounds rely on the sign of each parameter's effect, which is fixed by
//! the model's algebra:
//!
//! | parameter                     | effect on ratio |
//! |-------------------------------|-----------------|
//! | `outsourcing_rate`            | decreasing      |
//! | `revenue_per_adviser_primary` | increasing      |
//! | `revenue_per_adviser_2017`    | increasing      |
//! | `adviser_count`               | increasing      |
//! | `cpi_end`                     | increasing      |
//! | `cpi_start`                   | decreasing      |

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{DomainError, DomainResult};
use crate::model::ModelInputs;
use crate::ratio::ExactRatio;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParameterRef {
    OutsourcingRate,
    RevenuePerAdviserPrimary,
    RevenuePerAdviser2017,
    AdviserCount,
    CpiEnd,
    CpiStart,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Effect {
    Increasing,
    Decreasing,
}

impl ParameterRef {
    pub const ALL: [ParameterRef; 6] = [
        ParameterRef::AdviserCount,
        ParameterRef::CpiEnd,
        ParameterRef::CpiStart,
        ParameterRef::OutsourcingRate,
        ParameterRef::RevenuePerAdviser2017,
        ParameterRef::RevenuePerAdviserPrimary,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ParameterRef::OutsourcingRate => "outsourcing_rate",
            ParameterRef::RevenuePerAdviserPrimary => "revenue_per_adviser_primary",
            ParameterRef::RevenuePerAdviser2017 => "revenue_per_adviser_2017",
            ParameterRef::AdviserCount => "adviser_count",
            ParameterRef::CpiEnd => "cpi_end",
            ParameterRef::CpiStart => "cpi_start",
        }
    }

    fn effect(self) -> Effect {
        match self {
            ParameterRef::OutsourcingRate | ParameterRef::CpiStart => Effect::Decreasing,
            _ => Effect::Increasing,
        }
    }

    pub fn check_domain(self, value: &ExactRatio) -> DomainResult<()> {
        let ok = match self {
            ParameterRef::OutsourcingRate => value.is_positive() && *value <= ExactRatio::one(),
            _ => value.is_positive(),
        };
        if ok {
            Ok(())
        } else {
            Err(DomainError::OutOfDomain {
                name: self.as_str().to_owned(),
                value: value.to_exact_string(),
                domain: match self {
                    ParameterRef::OutsourcingRate => "(0, 1]",
                    _ => "(0, ∞)",
                },
            })
        }
    }

    pub fn value_in(self, inputs: &ModelInputs) -> ExactRatio {
        let t = &inputs.taxpayer;
        match self {
            ParameterRef::OutsourcingRate => t.outsourcing_rate.clone(),
            ParameterRef::RevenuePerAdviserPrimary => t.revenue_per_adviser_primary.clone(),
            ParameterRef::RevenuePerAdviser2017 => t.revenue_per_adviser_2017.clone(),
            ParameterRef::AdviserCount => t.adviser_count.clone(),
            ParameterRef::CpiEnd => t.cpi_end.clone(),
            ParameterRef::CpiStart => t.cpi_start.clone(),
        }
    }

    /// A copy of `inputs` with this parameter replaced by `value`.
    pub fn substitute(self, inputs: &ModelInputs, value: ExactRatio) -> DomainResult<ModelInputs> {
        self.check_domain(&value)?;
        let mut out = inputs.clone();
        let t = &mut out.taxpayer;
        let slot = match self {
            ParameterRef::OutsourcingRate => &mut t.outsourcing_rate,
            ParameterRef::RevenuePerAdviserPrimary => &mut t.revenue_per_adviser_primary,
            ParameterRef::RevenuePerAdviser2017 => &mut t.revenue_per_adviser_2017,
            ParameterRef::AdviserCount => &mut t.adviser_count,
            ParameterRef::CpiEnd => &mut t.cpi_end,
            ParameterRef::CpiStart => &mut t.cpi_start,
        };
        *slot = value;
        Ok(out)
    }
}

impl Ord for ParameterRef {
    fn cmp(&self, other: &Self) -> Ordering {
        self.as_str().cmp(other.as_str())
    }
}

impl PartialOrd for ParameterRef {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ParameterRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ParameterRef {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Self::ALL.iter().map(|p| p.as_str()).collect();
                format!("unknown parameter {s:?}; expected one of {}", names.join(", "))
            })
    }
}

/// Closed interval `[low, high]` for one parameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub low: ExactRatio,
    pub high: ExactRatio,
}

impl Bounds {
    pub fn new(low: ExactRatio, high: ExactRatio) -> Self {
        Bounds { low, high }
    }

    pub fn point(x: ExactRatio) -> Self {
        Bounds {
            low: x.clone(),
            high: x,
        }
    }

    pub fn contains(&self, x: &ExactRatio) -> bool {
        &self.low <= x && x <= &self.high
    }
}

pub type IntervalMap = BTreeMap<ParameterRef, Bounds>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepResult {
    pub parameter: ParameterRef,
    pub grid: Vec<ExactRatio>,
    pub ratios: Vec<ExactRatio>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalResult {
    pub parameter_intervals: IntervalMap,
    pub ratio_low: ExactRatio,
    pub ratio_high: ExactRatio,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TornadoEntry {
    pub parameter: ParameterRef,
    pub ratio_at_low: ExactRatio,
    pub ratio_at_high: ExactRatio,
    pub span: ExactRatio,
}

/// The headline ratio for a given set of inputs.
pub fn headline_ratio(inputs: &ModelInputs) -> DomainResult<ExactRatio> {
    Ok(inputs.evaluate()?.results.ratio_excl_municipal)
}

pub fn sweep(inputs: &ModelInputs, parameter: ParameterRef, grid: &[ExactRatio]) -> DomainResult<SweepResult> {
    for value in grid {
        parameter.check_domain(value)?;
    }
    let ratios = grid
        .iter()
        .map(|v| headline_ratio(&parameter.substitute(inputs, v.clone())?))
        .collect::<DomainResult<Vec<_>>>()?;
    Ok(SweepResult {
        parameter,
        grid: grid.to_vec(),
        ratios,
    })
}

fn check_intervals(intervals: &IntervalMap) -> DomainResult<()> {
    for (param, b) in intervals {
        param.check_domain(&b.low)?;
        param.check_domain(&b.high)?;
        if b.low > b.high {
            return Err(DomainError::OutOfDomain {
                name: param.as_str().to_owned(),
                value: format!("[{}, {}]", b.low, b.high),
                domain: "low <= high",
            });
        }
    }
    Ok(())
}

fn corner(inputs: &ModelInputs, intervals: &IntervalMap, want_high: bool) -> DomainResult<ModelInputs> {
    let mut out = inputs.clone();
    for (param, b) in intervals {
        let take_high = (param.effect() == Effect::Increasing) == want_high;
        let value = if take_high { &b.high } else { &b.low };
        out = param.substitute(&out, value.clone())?;
    }
    Ok(out)
}

/// Bounds of the headline ratio over the box of parameter intervals.
///
/// Uses the fixed effect signs to evaluate only the two extreme corners.
pub fn propagate_intervals(inputs: &ModelInputs, intervals: &IntervalMap) -> DomainResult<IntervalResult> {
    check_intervals(intervals)?;
    let ratio_low = headline_ratio(&corner(inputs, intervals, false)?)?;
    let ratio_high = headline_ratio(&corner(inputs, intervals, true)?)?;
    Ok(IntervalResult {
        parameter_intervals: intervals.clone(),
        ratio_low,
        ratio_high,
    })
}

/// One-at-a-time spans, largest first; equal spans order by parameter name.
pub fn tornado(inputs: &ModelInputs, intervals: &IntervalMap) -> DomainResult<Vec<TornadoEntry>> {
    check_intervals(intervals)?;
    let mut entries = intervals
        .iter()
        .map(|(param, b)| {
            let ratio_at_low = headline_ratio(&param.substitute(inputs, b.low.clone())?)?;
            let ratio_at_high = headline_ratio(&param.substitute(inputs, b.high.clone())?)?;
            let span = (&ratio_at_high - &ratio_at_low).abs();
            Ok(TornadoEntry {
                parameter: *param,
                ratio_at_low,
                ratio_at_high,
                span,
            })
        })
        .collect::<DomainResult<Vec<_>>>()?;
    entries.sort_by(|a, b| b.span.cmp(&a.span).then(a.parameter.cmp(&b.parameter)));
    Ok(entries)
}
