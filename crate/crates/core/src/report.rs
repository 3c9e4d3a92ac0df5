//! Machine-readable verification records.

use serde::{Deserialize, Serialize};

/// Outcome of one bounded check. `bound` is the truncation length (or other
/// size bound) the check ran at; `witness` is element text when one exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    pub bound: u64,
    pub passed: bool,
    pub witness: Option<String>,
}

impl CheckRecord {
    pub fn new(check: impl Into<String>, bound: u64, passed: bool) -> Self {
        CheckRecord { check: check.into(), bound, passed, witness: None }
    }

    pub fn with_witness(mut self, witness: impl ToString) -> Self {
        self.witness = Some(witness.to_string());
        self
    }
}
