//! Check reports and their JSON-lines serialization.

use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Flagged,
    Fail,
}

/// One line of output: `{check, anchor, inputs, status, evidence}`.
///
/// A failing report always carries `evidence.witness`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    /// The statement being checked.
    pub anchor: String,
    pub inputs: Value,
    pub status: Status,
    pub evidence: Map<String, Value>,
}

impl VerificationReport {
    pub fn new(check: &str, anchor: &str, inputs: Value) -> Self {
        VerificationReport {
            check: check.into(),
            anchor: anchor.into(),
            inputs,
            status: Status::Pass,
            evidence: Map::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Serialize) -> Self {
        self.put(key, value);
        self
    }

    pub fn put(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.evidence.insert(key.into(), v);
    }

    /// Marks the report failed, recording the witness.
    pub fn fail(mut self, witness: impl Serialize) -> Self {
        self.put("witness", witness);
        self.status = Status::Fail;
        self
    }

    /// Marks the report flagged unless it already failed.
    pub fn flag(mut self, reason: &str) -> Self {
        self.put("flag", reason);
        if self.status == Status::Pass {
            self.status = Status::Flagged;
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

/// A collection of reports, emitted sorted by check name.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ReportSet {
    pub reports: Vec<VerificationReport>,
}

impl ReportSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, r: VerificationReport) {
        self.reports.push(r);
    }

    pub fn extend(&mut self, rs: impl IntoIterator<Item = VerificationReport>) {
        self.reports.extend(rs);
    }

    fn sorted(&self) -> Vec<&VerificationReport> {
        let mut v: Vec<&VerificationReport> = self.reports.iter().collect();
        v.sort_by(|a, b| a.check.cmp(&b.check));
        v
    }

    pub fn write_jsonl(&self, mut out: impl Write) -> io::Result<()> {
        for r in self.sorted() {
            writeln!(out, "{}", r.to_json_line())?;
        }
        Ok(())
    }

    pub fn count(&self, s: Status) -> usize {
        self.reports.iter().filter(|r| r.status == s).count()
    }

    /// 0 when nothing failed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.reports.iter().any(|r| r.failed()) {
            1
        } else {
            0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn fail_carries_witness() {
        let r = VerificationReport::new("x", "a", json!({})).fail(json!([1, 0, 0]));
        assert!(r.failed());
        assert_eq!(r.evidence["witness"], json!([1, 0, 0]));
        let r = r.flag("late");
        assert!(r.failed());
    }

    #[test]
    fn set_order_and_exit() {
        let mut s = ReportSet::new();
        s.push(VerificationReport::new("b", "a", json!({})));
        s.push(VerificationReport::new("a", "a", json!({})).flag("f"));
        assert_eq!(s.exit_code(), 0);
        let mut buf = Vec::new();
        s.write_jsonl(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with(r#"{"check":"a""#));
        assert!(text.contains(r#""status":"flagged""#));
        s.push(VerificationReport::new("c", "a", json!({})).fail("w"));
        assert_eq!(s.exit_code(), 1);
    }
}
