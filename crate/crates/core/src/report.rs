use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::Result;

pub const REPORT_VERSION: u32 = 1;

/// Outcome of an experiment's bound check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Every asserted bound held.
    Pass,
    /// An asserted bound was violated.
    Fail,
    /// A soft envelope was exceeded; flagged for inspection.
    Review,
    /// Nothing was asserted.
    Info,
}

impl Verdict {
    pub fn from_check(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    /// Combines two verdicts, keeping the more severe one.
    pub fn and(self, other: Verdict) -> Verdict {
        let rank = |v: Verdict| match v {
            Verdict::Info => 0,
            Verdict::Pass => 1,
            Verdict::Review => 2,
            Verdict::Fail => 3,
        };
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }
}

/// Versioned experiment report. Map-valued fields are ordered so that the
/// serialized form is deterministic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub report_version: u32,
    pub experiment: String,
    pub parameters: BTreeMap<String, Value>,
    pub seed: u64,
    pub exact_values: BTreeMap<String, f64>,
    pub mc_estimate: Option<f64>,
    pub stderr: Option<f64>,
    pub bound: Option<f64>,
    pub ratio: Option<f64>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<BTreeMap<String, Value>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ExperimentReport {
    pub fn new(experiment: impl Into<String>, seed: u64) -> Self {
        Self {
            report_version: REPORT_VERSION,
            experiment: experiment.into(),
            parameters: BTreeMap::new(),
            seed,
            exact_values: BTreeMap::new(),
            mc_estimate: None,
            stderr: None,
            bound: None,
            ratio: None,
            verdict: Verdict::Info,
            rows: vec![],
            notes: vec![],
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.into(), value.into());
        self
    }

    pub fn exact(&mut self, key: &str, value: f64) -> &mut Self {
        self.exact_values.insert(key.into(), value);
        self
    }

    pub fn mc(&mut self, estimate: f64, stderr: f64) -> &mut Self {
        self.mc_estimate = Some(estimate);
        self.stderr = Some(stderr);
        self
    }

    /// Records `value <= bound` and the ratio `value / bound`.
    pub fn check_upper(&mut self, value: f64, bound: f64) -> bool {
        self.bound = Some(bound);
        self.ratio = Some(if bound != 0.0 { value / bound } else { f64::INFINITY });
        let ok = value <= bound;
        self.verdict = self.verdict.and(Verdict::from_check(ok));
        ok
    }

    pub fn assert(&mut self, ok: bool, note: impl Into<String>) -> bool {
        if !ok {
            self.notes.push(note.into());
        }
        self.verdict = self.verdict.and(Verdict::from_check(ok));
        ok
    }

    pub fn review(&mut self, ok: bool, note: impl Into<String>) {
        if !ok {
            self.notes.push(note.into());
            self.verdict = self.verdict.and(Verdict::Review);
        }
    }

    pub fn note(&mut self, note: impl Into<String>) -> &mut Self {
        self.notes.push(note.into());
        self
    }

    pub fn row<S: Serialize>(&mut self, row: &S) -> Result<()> {
        match serde_json::to_value(row)? {
            Value::Object(map) => self.rows.push(map.into_iter().collect()),
            other => {
                let mut m = BTreeMap::new();
                m.insert("value".to_string(), other);
                self.rows.push(m);
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// One CSV line per row; without rows, a single line of the summary
    /// fields. Columns are the sorted union of keys.
    pub fn to_csv(&self) -> String {
        let rows: Vec<BTreeMap<String, Value>> = if self.rows.is_empty() {
            let mut m: BTreeMap<String, Value> = self.parameters.clone();
            for (k, v) in &self.exact_values {
                m.insert(k.clone(), (*v).into());
            }
            let opt = |x: Option<f64>| x.map(Value::from).unwrap_or(Value::Null);
            m.insert("mc_estimate".into(), opt(self.mc_estimate));
            m.insert("stderr".into(), opt(self.stderr));
            m.insert("bound".into(), opt(self.bound));
            m.insert("ratio".into(), opt(self.ratio));
            vec![m]
        } else {
            self.rows.clone()
        };
        let mut cols: Vec<&String> = rows.iter().flat_map(|r| r.keys()).collect();
        cols.sort();
        cols.dedup();
        let mut out = String::new();
        let _ = writeln!(out, "experiment,seed,{}", cols.iter().map(|c| csv_field(c)).collect::<Vec<_>>().join(","));
        for r in &rows {
            let cells: Vec<String> = cols
                .iter()
                .map(|c| match r.get(*c) {
                    None | Some(Value::Null) => String::new(),
                    Some(Value::String(s)) => csv_field(s),
                    Some(v) => csv_field(&v.to_string()),
                })
                .collect();
            let _ = writeln!(out, "{},{},{}", csv_field(&self.experiment), self.seed, cells.join(","));
        }
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let mut r = ExperimentReport::new("demo", 7).param("d", 4);
        r.exact("advantage", 0.05);
        r.mc(0.049, 0.001);
        r.check_upper(0.05, 0.75);
        r.row(&serde_json::json!({"trial": 0, "hit": true})).unwrap();
        let back = ExperimentReport::from_json(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.verdict, Verdict::Pass);
    }

    #[test]
    fn csv_quotes_and_columns() {
        let mut r = ExperimentReport::new("x", 1);
        r.row(&serde_json::json!({"a": 1, "b": "p,q"})).unwrap();
        r.row(&serde_json::json!({"a": 2})).unwrap();
        let csv = r.to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "experiment,seed,a,b");
        assert_eq!(lines[1], "x,1,1,\"p,q\"");
        assert_eq!(lines[2], "x,1,2,");
    }

    #[test]
    fn verdict_severity() {
        assert_eq!(Verdict::Pass.and(Verdict::Review), Verdict::Review);
        assert_eq!(Verdict::Fail.and(Verdict::Pass), Verdict::Fail);
        assert_eq!(Verdict::Info.and(Verdict::Pass), Verdict::Pass);
    }
}
