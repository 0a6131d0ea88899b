//! Check records shared by the verifiers and the CLI.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub ids: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl CheckRecord {
    pub fn new(check: &str, ids: impl Into<String>, pass: bool, witness: impl FnOnce() -> String) -> Self {
        CheckRecord {
            check: check.to_string(),
            ids: ids.into(),
            pass,
            witness: (!pass).then(witness),
        }
    }

    pub fn fail(check: &str, ids: impl Into<String>, witness: String) -> Self {
        CheckRecord {
            check: check.to_string(),
            ids: ids.into(),
            pass: false,
            witness: Some(witness),
        }
    }
}

pub fn all_pass(records: &[CheckRecord]) -> bool {
    records.iter().all(|r| r.pass)
}
