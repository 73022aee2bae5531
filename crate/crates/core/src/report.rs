//! Verification reports: one record per assertion.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub instance: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn pass(&mut self, check: &str, instance: &str) {
        self.records.push(CheckRecord {
            check: check.into(),
            instance: instance.into(),
            status: Status::Pass,
            witness: None,
        });
    }

    pub fn fail(&mut self, check: &str, instance: &str, witness: impl Into<String>) {
        self.records.push(CheckRecord {
            check: check.into(),
            instance: instance.into(),
            status: Status::Fail,
            witness: Some(witness.into()),
        });
    }

    /// Records pass on `Ok`, fail with the error text as witness on `Err`.
    pub fn record<E: std::fmt::Display>(&mut self, check: &str, instance: &str, result: Result<(), E>) {
        match result {
            Ok(()) => self.pass(check, instance),
            Err(e) => self.fail(check, instance, e.to_string()),
        }
    }

    pub fn extend(&mut self, other: Report) {
        self.records.extend(other.records);
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.status == Status::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| r.status == Status::Fail)
    }
}
