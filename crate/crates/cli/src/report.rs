//! Check reports and their text / JSON rendering.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use multiloop_core::check::Outcome;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub schema_version: u32,
    pub name: String,
    pub params: BTreeMap<String, Value>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub derived: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl CheckReport {
    pub fn new(name: &str, params: BTreeMap<String, Value>, status: Status) -> Self {
        Self { schema_version: SCHEMA_VERSION, name: name.to_string(), params, status, witness: None, derived: BTreeMap::new(), wall_ms: None }
    }

    pub fn from_outcome(name: &str, params: BTreeMap<String, Value>, outcome: Outcome) -> Self {
        let status = if outcome.passed { Status::Pass } else { Status::Fail };
        let witness = match (status, outcome.witness) {
            (Status::Fail, None) => Some("check failed".to_string()),
            (_, w) => w,
        };
        Self { witness, derived: outcome.derived, ..Self::new(name, params, status) }
    }

    pub fn skipped(name: &str, params: BTreeMap<String, Value>, reason: impl Into<String>) -> Self {
        let mut report = Self::new(name, params, Status::Skipped);
        report.derived.insert("reason".into(), Value::from(reason.into()));
        report
    }

    pub fn error(name: &str, params: BTreeMap<String, Value>, error: impl std::fmt::Display) -> Self {
        Self { witness: Some(format!("error: {error}")), ..Self::new(name, params, Status::Fail) }
    }

    pub fn fail(&mut self, witness: impl Into<String>) {
        self.status = Status::Fail;
        self.witness = Some(witness.into());
    }

    /// `key=value` pairs of the parameters, space separated.
    pub fn params_text(&self) -> String {
        self.params.iter().map(|(k, v)| format!("{k}={}", value_text(v))).collect::<Vec<_>>().join(" ")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (expected text or json)")),
        }
    }
}

fn value_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// `true` iff no report failed; skipped reports do not count.
pub fn all_passed(reports: &[CheckReport]) -> bool {
    reports.iter().all(|r| r.status != Status::Fail)
}

/// Renders the reports. Wall times are included only when `timings` is set,
/// so that output is byte-stable by default.
pub fn emit_report(reports: &[CheckReport], format: Format, timings: bool) -> Vec<u8> {
    let stripped: Vec<CheckReport>;
    let reports = if timings {
        reports
    } else {
        stripped = reports.iter().cloned().map(|r| CheckReport { wall_ms: None, ..r }).collect();
        &stripped
    };
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(reports).expect("reports serialize");
            out.push(b'\n');
            out
        }
        Format::Text => text_report(reports).into_bytes(),
    }
}

fn text_report(reports: &[CheckReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let _ = write!(out, "{:<8}{:<14}{}", r.status.as_str(), r.name, r.params_text());
        if let Some(ms) = r.wall_ms {
            let _ = write!(out, "  [{ms} ms]");
        }
        out.push('\n');
        if let Some(w) = &r.witness {
            let _ = writeln!(out, "        witness: {w}");
        }
        for (k, v) in &r.derived {
            let _ = writeln!(out, "        {k} = {}", value_text(v));
        }
    }
    let count = |s: Status| reports.iter().filter(|r| r.status == s).count();
    let _ = writeln!(
        out,
        "{} checks: {} passed, {} failed, {} skipped",
        reports.len(),
        count(Status::Pass),
        count(Status::Fail),
        count(Status::Skipped)
    );
    out
}
