use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{NctError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn is_pass(self) -> bool {
        self == Status::Pass
    }
}

/// One measured quantity against its bound. Non-finite numbers are stored
/// as `None` so reports survive a JSON round trip.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub measured: Option<f64>,
    pub bound: Option<f64>,
    pub margin: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl Check {
    /// Passes iff `measured <= bound`.
    pub fn at_most(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            status: Status::from_bool(measured <= bound),
            measured: finite(measured),
            bound: finite(bound),
            margin: finite(bound - measured),
            detail: None,
        }
    }

    /// Passes iff `measured >= bound`.
    pub fn at_least(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            status: Status::from_bool(measured >= bound),
            measured: finite(measured),
            bound: finite(bound),
            margin: finite(measured - bound),
            detail: None,
        }
    }

    /// Passes iff `|measured - target| <= tol`; records the deviation.
    pub fn close(name: impl Into<String>, measured: f64, target: f64, tol: f64) -> Self {
        Self::at_most(name, (measured - target).abs(), tol)
            .with_detail(format!("value {measured:.12e}, target {target:.12e}"))
    }

    pub fn finite(name: impl Into<String>, value: f64) -> Self {
        Self {
            name: name.into(),
            status: Status::from_bool(value.is_finite()),
            measured: finite(value),
            bound: None,
            margin: None,
            detail: None,
        }
    }

    pub fn flag(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status: Status::from_bool(ok),
            measured: None,
            bound: None,
            margin: None,
            detail: Some(detail.into()).filter(|d| !d.is_empty()),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status.is_pass()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

/// Structured pass/fail record of a verification run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub seed: u64,
    pub status: Status,
    pub params: BTreeMap<String, serde_json::Value>,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, seed: u64) -> Self {
        Self {
            suite: suite.into(),
            seed,
            status: Status::Pass,
            params: BTreeMap::new(),
            checks: Vec::new(),
            timing: None,
        }
    }

    pub fn set_param(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.params.insert(key.to_string(), v);
    }

    pub fn push(&mut self, check: Check) {
        if !check.passed() {
            self.status = Status::Fail;
        }
        self.checks.push(check);
    }

    /// Appends the checks of `other` with names prefixed by `prefix/`.
    pub fn absorb(&mut self, prefix: &str, other: VerificationReport) {
        for (k, v) in other.params {
            self.params.insert(format!("{prefix}/{k}"), v);
        }
        for mut c in other.checks {
            c.name = format!("{prefix}/{}", c.name);
            self.push(c);
        }
    }

    pub fn passed(&self) -> bool {
        self.status.is_pass()
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn without_timing(&self) -> Self {
        Self {
            timing: None,
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["suite", "name", "status", "measured", "bound", "margin", "detail"])
            .expect("in-memory write");
        let num = |x: Option<f64>| x.map(|v| format!("{v:.12e}")).unwrap_or_default();
        for c in &self.checks {
            w.write_record([
                self.suite.as_str(),
                c.name.as_str(),
                if c.passed() { "pass" } else { "fail" },
                &num(c.measured),
                &num(c.bound),
                &num(c.margin),
                c.detail.as_deref().unwrap_or(""),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "# {} (seed {}) {status}\n", self.suite, self.seed);
        if !self.params.is_empty() {
            out.push_str("| parameter | value |\n|---|---|\n");
            for (k, v) in &self.params {
                let _ = writeln!(out, "| {k} | {v} |");
            }
            out.push('\n');
        }
        out.push_str("| check | status | measured | bound | margin |\n|---|---|---|---|---|\n");
        let num = |x: Option<f64>| x.map(|v| format!("{v:.4e}")).unwrap_or_else(|| "-".into());
        for c in &self.checks {
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} |",
                c.name.replace('|', "\\|"),
                if c.passed() { "pass" } else { "**fail**" },
                num(c.measured),
                num(c.bound),
                num(c.margin)
            );
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Md => self.to_markdown(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Md,
}

impl FromStr for Format {
    type Err = NctError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "md" | "markdown" => Ok(Format::Md),
            other => Err(NctError::Usage(format!("unknown format '{other}' (json|csv|md)"))),
        }
    }
}
