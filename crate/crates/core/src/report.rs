//! Named pass/fail checks and their aggregation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Witness {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub details: String,
    pub witnesses: Vec<Witness>,
}

impl Check {
    pub fn pass(name: &str, details: impl Into<String>) -> Self {
        Self { name: name.into(), status: Status::Pass, details: details.into(), witnesses: Vec::new() }
    }

    pub fn fail(name: &str, details: impl Into<String>, witnesses: Vec<Complex64>) -> Self {
        Self {
            name: name.into(),
            status: Status::Fail,
            details: details.into(),
            witnesses: witnesses.into_iter().map(Witness::from).collect(),
        }
    }

    pub fn not_applicable(name: &str, details: impl Into<String>) -> Self {
        Self { name: name.into(), status: Status::NotApplicable, details: details.into(), witnesses: Vec::new() }
    }

    /// Pass when `witnesses` is empty, fail otherwise.
    pub fn from_witnesses(name: &str, details: impl Into<String>, witnesses: Vec<Complex64>) -> Self {
        if witnesses.is_empty() {
            Self::pass(name, details)
        } else {
            Self::fail(name, details, witnesses)
        }
    }

    /// Pass or fail on a boolean; failing checks carry `witnesses`.
    pub fn from_bool(name: &str, ok: bool, details: impl Into<String>, witnesses: Vec<Complex64>) -> Self {
        if ok {
            Self::pass(name, details)
        } else {
            Self::fail(name, details, witnesses)
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Check>) {
        self.checks.extend(cs);
    }

    pub fn has_failure(&self) -> bool {
        self.checks.iter().any(Check::failed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.failed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
