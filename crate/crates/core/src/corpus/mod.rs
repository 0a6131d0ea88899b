//! Worked examples: fixture seeds, the two A2 tables, Gr(2,5) and dP5.
//!
//! Expected values are stored as expression strings in `fixtures/` and
//! compared against the engine with exact arithmetic.

pub mod dp5;
pub mod expr;
pub mod gr25;
pub mod tables;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gfan::SeedJson;
use crate::report::{all_pass, CheckRecord};

const SEEDS: &[(&str, &str)] = &[
    ("a1", include_str!("../../fixtures/seeds/a1.json")),
    ("a2", include_str!("../../fixtures/seeds/a2.json")),
    ("a2_principal", include_str!("../../fixtures/seeds/a2_principal.json")),
    ("b2", include_str!("../../fixtures/seeds/b2.json")),
    ("g2", include_str!("../../fixtures/seeds/g2.json")),
    ("a3", include_str!("../../fixtures/seeds/a3.json")),
    ("markov", include_str!("../../fixtures/seeds/markov.json")),
    ("dp5", include_str!("../../fixtures/seeds/dp5.json")),
    ("gr25", include_str!("../../fixtures/seeds/gr25.json")),
];

/// Names of the tables `run_table` accepts.
pub const TABLES: &[&str] = &["a2", "a2-principal", "gr25", "dp5"];

pub fn seed_names() -> Vec<&'static str> {
    SEEDS.iter().map(|(n, _)| *n).collect()
}

pub fn seed_fixture(name: &str) -> Result<SeedJson> {
    let (_, text) = SEEDS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::InvalidInput(format!("unknown seed fixture {name}; known: {}", seed_names().join(", "))))?;
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("fixture {name}: {e}")))
}

pub(crate) fn parse_fixture<T: serde::de::DeserializeOwned>(name: &str, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("fixture {name}: {e}")))
}

/// Checks of one worked example plus its rendered table.
#[derive(Clone, Debug, Serialize)]
pub struct CorpusReport {
    pub name: String,
    pub records: Vec<CheckRecord>,
    pub table: String,
}

impl CorpusReport {
    pub fn pass(&self) -> bool {
        !self.records.is_empty() && all_pass(&self.records)
    }

    pub fn failures(&self) -> Vec<&CheckRecord> {
        self.records.iter().filter(|r| !r.pass).collect()
    }
}

pub fn run_table(name: &str) -> Result<CorpusReport> {
    match name {
        "a2" => tables::run_a2_y_pattern(),
        "a2-principal" => tables::run_a2_principal(),
        "gr25" => gr25::run_gr25(),
        "dp5" => dp5::run_dp5(),
        _ => Err(Error::InvalidInput(format!("unknown table {name}; known: {}", TABLES.join(", ")))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_fixtures_load() {
        for n in seed_names() {
            let s = seed_fixture(n).unwrap();
            s.exchange_data().unwrap();
            s.coefficients().unwrap();
        }
        assert!(seed_fixture("nope").is_err());
    }
}
