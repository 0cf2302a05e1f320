//! Check records and their JSON-lines and table renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::Settings;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One pass/fail check. `residual` is always finite; a non-finite input is
/// stored as `f64::MAX` and fails.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    /// The statement the check exercises.
    pub anchor: String,
    pub status: Status,
    pub residual: f64,
    pub tol: f64,
    /// A point where the check failed, in chart coordinates.
    pub witness: Option<Vec<f64>>,
}

impl Check {
    /// Passes iff `residual <= tol`.
    pub fn new(id: impl Into<String>, anchor: impl Into<String>, residual: f64, tol: f64) -> Self {
        let finite = residual.is_finite();
        Check {
            id: id.into(),
            anchor: anchor.into(),
            status: if finite && residual <= tol { Status::Pass } else { Status::Fail },
            residual: if finite { residual } else { f64::MAX },
            tol,
            witness: None,
        }
    }

    /// A check with a boolean outcome and no numerical residual.
    pub fn flag(id: impl Into<String>, anchor: impl Into<String>, ok: bool) -> Self {
        Check::new(id, anchor, if ok { 0.0 } else { 1.0 }, 0.0)
    }

    pub fn with_witness(mut self, w: Option<Vec<f64>>) -> Self {
        if self.status == Status::Fail {
            self.witness = w;
        }
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub suite: String,
    pub seed: u64,
    pub tol: Option<f64>,
    pub points: usize,
    checks: BTreeMap<String, Check>,
    values: BTreeMap<String, Value>,
}

#[derive(Serialize)]
struct CheckRecord<'a> {
    record: &'static str,
    #[serde(flatten)]
    check: &'a Check,
}

#[derive(Serialize)]
struct ValueRecord<'a> {
    record: &'static str,
    id: &'a str,
    value: &'a Value,
}

#[derive(Serialize)]
struct SummaryRecord<'a> {
    record: &'static str,
    suite: &'a str,
    seed: u64,
    tol: Option<f64>,
    points: usize,
    checks: usize,
    failed: usize,
    status: Status,
}

impl Report {
    pub fn new(suite: impl Into<String>, s: &Settings) -> Self {
        Report {
            suite: suite.into(),
            seed: s.seed,
            tol: s.tol,
            points: s.points,
            checks: BTreeMap::new(),
            values: BTreeMap::new(),
        }
    }

    /// # Panics
    /// Panics on a duplicate id.
    pub fn push(&mut self, c: Check) {
        let prev = self.checks.insert(c.id.clone(), c);
        assert!(prev.is_none(), "duplicate check id");
    }

    /// Records a measured quantity that is not itself pass/fail.
    pub fn value(&mut self, id: impl Into<String>, v: impl Into<Value>) {
        self.values.insert(id.into(), v.into());
    }

    pub fn merge(&mut self, other: Report) {
        for c in other.checks.into_values() {
            self.push(c);
        }
        self.values.extend(other.values);
    }

    pub fn checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.values()
    }

    pub fn check(&self, id: &str) -> Option<&Check> {
        self.checks.get(id)
    }

    pub fn get_value(&self, id: &str) -> Option<&Value> {
        self.values.get(id)
    }

    pub fn failed(&self) -> usize {
        self.checks.values().filter(|c| c.status == Status::Fail).count()
    }

    pub fn passed(&self) -> bool {
        self.failed() == 0
    }

    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for c in self.checks.values() {
            let line = serde_json::to_string(&CheckRecord { record: "check", check: c }).expect("serializable");
            out.push_str(&line);
            out.push('\n');
        }
        for (id, v) in &self.values {
            let line = serde_json::to_string(&ValueRecord { record: "value", id, value: v }).expect("serializable");
            out.push_str(&line);
            out.push('\n');
        }
        let summary = SummaryRecord {
            record: "summary",
            suite: &self.suite,
            seed: self.seed,
            tol: self.tol,
            points: self.points,
            checks: self.checks.len(),
            failed: self.failed(),
            status: if self.passed() { Status::Pass } else { Status::Fail },
        };
        out.push_str(&serde_json::to_string(&summary).expect("serializable"));
        out.push('\n');
        out
    }

    pub fn to_table(&self) -> String {
        let w = self.checks.keys().chain(self.values.keys()).map(|k| k.chars().count()).max().unwrap_or(2).max(2);
        let mut out = String::new();
        let _ = writeln!(out, "{:<6} {:<w$}  {:>10}  {:>8}", "status", "id", "residual", "tol");
        for c in self.checks.values() {
            let st = if c.status == Status::Pass { "pass" } else { "FAIL" };
            let _ = writeln!(out, "{st:<6} {:<w$}  {:>10.2e}  {:>8.0e}", c.id, c.residual, c.tol);
            if let Some(p) = &c.witness {
                let _ = writeln!(out, "{:<6} {:<w$}  at {p:?}", "", "");
            }
        }
        for (id, v) in &self.values {
            let _ = writeln!(out, "{:<6} {id:<w$}  {v}", "value");
        }
        let _ = writeln!(
            out,
            "suite {}: {}/{} passed (seed {})",
            self.suite,
            self.checks.len() - self.failed(),
            self.checks.len(),
            self.seed
        );
        out
    }
}
