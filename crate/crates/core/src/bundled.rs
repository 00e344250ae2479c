//! The germany-2021 dataset compiled into the library.

use crate::ledger::{parse_dataset, Dataset, LoadError};

pub const GERMANY_2021_LEDGER: &str = include_str!("../data/germany-2021/ledger.csv");
pub const GERMANY_2021_PARAMS: &str = include_str!("../data/germany-2021/params.txt");

pub fn germany_2021() -> Result<Dataset, LoadError> {
    parse_dataset(GERMANY_2021_LEDGER, GERMANY_2021_PARAMS)
}
