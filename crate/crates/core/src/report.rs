//! Pass/fail records shared by every verification suite.

use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Indeterminate,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Indeterminate => "indeterminate",
        }
    }
}

/// One named assertion with its worst residual and an optional witness.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: String,
    pub check: String,
    pub verdict: Verdict,
    #[serde(serialize_with = "finite_or_null")]
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

fn finite_or_null<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else {
        s.serialize_none()
    }
}

impl Check {
    pub fn new(suite: &str, check: &str, verdict: Verdict, residual: f64) -> Self {
        Self { suite: suite.into(), check: check.into(), verdict, residual, witness: None }
    }

    pub fn with_witness(mut self, witness: Value) -> Self {
        self.witness = Some(witness);
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    /// True when no check failed. Indeterminate entries do not fail a run.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn find(&self, check: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.check == check)
    }
}

/// Tracks the worst residual and first witness across many trials.
#[derive(Debug, Clone, Default)]
pub struct Tally {
    pub trials: usize,
    pub failures: usize,
    pub max_residual: f64,
    pub witness: Option<Value>,
}

impl Tally {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records one trial; the witness closure runs only for the first failure.
    pub fn record(&mut self, ok: bool, residual: f64, witness: impl FnOnce() -> Value) {
        self.trials += 1;
        if residual > self.max_residual || residual.is_nan() {
            self.max_residual = residual;
        }
        if !ok {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        self.trials += other.trials;
        self.failures += other.failures;
        if other.max_residual > self.max_residual || other.max_residual.is_nan() {
            self.max_residual = other.max_residual;
        }
        if self.witness.is_none() {
            self.witness = other.witness;
        }
        self
    }

    pub fn into_check(self, suite: &str, check: &str) -> Check {
        let verdict = Verdict::from_bool(self.failures == 0);
        let mut c = Check::new(suite, check, verdict, self.max_residual);
        c.witness = self.witness;
        c
    }
}
