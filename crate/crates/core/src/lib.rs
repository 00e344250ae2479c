//! Estimation engine for total tax administrative cost as a share of tax
//! revenue.
//!
//! The pipeline has three cost categories:
//!
//! - **Cat1**, the government's own cost, aggregated from budget-ledger
//!   positions per jurisdiction ([`cat1`]);
//! - **Cat2**, fees taxpayers pay to tax advisers, from an adviser census and
//!   per-adviser revenue ([`taxpayer`]);
//! - **Cat3**, the unpriced effort of taxpayers who do not outsource, gauged
//!   by grossing Cat2 up with the outsourcing rate ([`taxpayer`]).
//!
//! All amounts are exact: ledger values are integer cents ([`Money`]) and
//! everything derived is an arbitrary-precision rational ([`ExactRatio`]).
//! Rounding happens only when a value is rendered.

pub mod bundled;
pub mod cat1;
pub mod error;
pub mod ledger;
pub mod model;
pub mod money;
pub mod numfmt;
pub mod ratio;
pub mod report;
pub mod results;
pub mod sensitivity;
pub mod taxpayer;

pub use error::{DomainError, DomainResult};
pub use money::{money_sum, ratio_of, Money};
pub use ratio::{render_rounded, ExactRatio, RoundingMode};
