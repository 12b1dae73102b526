//! The JSON report emitted by every verification run.

use coleman_core::report::{Failure, Report};
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, Serialize)]
pub struct JsonReport {
    pub suite: String,
    pub params: Value,
    pub checked: u64,
    pub failures: Vec<Failure>,
    pub seed: u64,
    pub elapsed_ms: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub parts: Vec<JsonReport>,
}

impl JsonReport {
    pub fn new(suite: &str, params: Value, seed: u64, report: Report, elapsed_ms: u64) -> Self {
        Self {
            suite: suite.into(),
            params,
            checked: report.checked,
            failures: report.failures,
            seed,
            elapsed_ms,
            parts: Vec::new(),
        }
    }

    /// Sums the parts; the failures of each part are carried up unchanged.
    pub fn aggregate(suite: &str, params: Value, seed: u64, parts: Vec<JsonReport>) -> Self {
        Self {
            suite: suite.into(),
            params,
            checked: parts.iter().map(|p| p.checked).sum(),
            failures: parts.iter().flat_map(|p| p.failures.iter().cloned()).collect(),
            seed,
            elapsed_ms: parts.iter().map(|p| p.elapsed_ms).sum(),
            parts,
        }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn emit_report(r: &JsonReport) -> String {
    serde_json::to_string(r).expect("report serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report() {
        let r = JsonReport::new("x", Value::Null, 1, Report::new(), 0);
        let v: Value = serde_json::from_str(&emit_report(&r)).unwrap();
        assert_eq!(v["checked"], 0);
        assert_eq!(v["failures"], Value::Array(vec![]));
        assert!(v.get("parts").is_none());
    }

    #[test]
    fn failure_carries_input() {
        let mut rep = Report::new();
        rep.fail("g=[[1]]".into(), "1".into(), "2".into());
        let r = JsonReport::new("x", Value::Null, 1, rep, 0);
        let agg = JsonReport::aggregate("all", Value::Null, 1, vec![r]);
        assert!(!agg.ok());
        assert_eq!(agg.failures[0].input, "g=[[1]]");
    }
}
