//! Machine-readable report formats shared by the self-test and the CLI.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::matgroup::SquareMatrix;
use crate::prank::RankWitness;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// A deliberately false statement was refuted, as intended.
    ExpectedFail,
    Skipped,
}

impl Status {
    pub fn is_ok(self) -> bool {
        self != Status::Fail
    }
}

/// Matrices serialized row-major, with the ring they live over.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessJson {
    pub p: u64,
    pub e: u32,
    pub n: usize,
    pub matrices: Vec<Vec<u64>>,
}

impl WitnessJson {
    pub fn from_matrices(matrices: &[SquareMatrix]) -> Option<Self> {
        let first = matrices.first()?;
        Some(WitnessJson {
            p: first.ctx().p(),
            e: first.ctx().e(),
            n: first.n(),
            matrices: matrices.iter().map(SquareMatrix::to_values).collect(),
        })
    }

    pub fn from_witness(w: &RankWitness) -> Option<Self> {
        Self::from_matrices(w.basis())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_id: String,
    pub status: Status,
    pub value: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessJson>,
    pub anchor: String,
}

impl CheckResult {
    pub fn new(check_id: impl Into<String>, passed: bool, value: Value, anchor: &str) -> Self {
        CheckResult {
            check_id: check_id.into(),
            status: if passed { Status::Pass } else { Status::Fail },
            value,
            witness: None,
            anchor: anchor.to_string(),
        }
    }

    pub fn with_witness(mut self, witness: Option<WitnessJson>) -> Self {
        self.witness = witness;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub params: Value,
    pub results: Vec<CheckResult>,
    pub elapsed_ms: u64,
}

impl Report {
    pub fn new(params: Value, results: Vec<CheckResult>, elapsed_ms: u64) -> Self {
        Report { tool_version: TOOL_VERSION.to_string(), params, results, elapsed_ms }
    }

    pub fn all_ok(&self) -> bool {
        self.results.iter().all(|r| r.status.is_ok())
    }

    /// 0 when every check passed (expected failures included), 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_ok() {
            0
        } else {
            1
        }
    }

    /// One line per check.
    pub fn to_table(&self) -> String {
        let width = self.results.iter().map(|r| r.check_id.len()).max().unwrap_or(8);
        let mut out = String::new();
        for r in &self.results {
            let status = match r.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::ExpectedFail => "expected-fail",
                Status::Skipped => "skipped",
            };
            let _ = writeln!(out, "{:<width$}  {:<13}  {}", r.check_id, status, r.value);
        }
        let _ = writeln!(out, "{} checks, {} ms", self.results.len(), self.elapsed_ms);
        out
    }
}

/// One row of the SL rank table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankRow {
    pub p: u64,
    pub e: u32,
    pub n: usize,
    pub rank: usize,
    /// Upper bound for SL_{2g}; absent for other groups.
    pub bound: Option<u64>,
    /// Exact value where the table asserts equality.
    pub expected: Option<usize>,
}

impl RankRow {
    pub fn matches(&self) -> bool {
        self.bound.is_none_or(|b| self.rank as u64 <= b) && self.expected.is_none_or(|x| x == self.rank)
    }
}

pub fn rank_rows_to_csv(rows: &[RankRow]) -> String {
    let mut out = String::from("p,e,n,rank,bound,expected,match\n");
    for r in rows {
        let bound = r.bound.map(|x| x.to_string()).unwrap_or_default();
        let expected = r.expected.map(|x| x.to_string()).unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{},{},{},{}", r.p, r.e, r.n, r.rank, bound, expected, r.matches());
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdRow {
    pub p: u64,
    pub g: u64,
    pub sl_bound: u64,
    pub galois_bound: u64,
    pub threshold: u64,
}

pub fn threshold_rows_to_csv(rows: &[ThresholdRow]) -> String {
    let mut out = String::from("p,g,sl_bound,galois_bound,threshold\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{},{}", r.p, r.g, r.sl_bound, r.galois_bound, r.threshold);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modring::ModulusContext;

    #[test]
    fn report_round_trips_through_json() {
        let ctx = ModulusContext::new(2, 3).unwrap();
        let m = SquareMatrix::scalar(2, ctx, 3);
        let report = Report::new(
            serde_json::json!({"grid": "default"}),
            vec![
                CheckResult::new("a", true, serde_json::json!(3), "x").with_witness(WitnessJson::from_matrices(&[m])),
                CheckResult { status: Status::ExpectedFail, ..CheckResult::new("b", false, Value::Null, "y") },
            ],
            12,
        );
        let text = serde_json::to_string(&report).unwrap();
        assert!(text.contains("\"expected-fail\""));
        assert!(text.contains("\"matrices\":[[3,0,0,3]]"));
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);
        assert_eq!(report.exit_code(), 0);
    }

    #[test]
    fn failed_check_sets_exit_code() {
        let report = Report::new(Value::Null, vec![CheckResult::new("a", false, Value::Null, "x")], 0);
        assert_eq!(report.exit_code(), 1);
    }

    #[test]
    fn csv_layout() {
        let rows = vec![
            RankRow { p: 3, e: 2, n: 2, rank: 3, bound: Some(3), expected: Some(3) },
            RankRow { p: 3, e: 2, n: 4, rank: 10, bound: Some(19), expected: None },
        ];
        assert_eq!(rank_rows_to_csv(&rows), "p,e,n,rank,bound,expected,match\n3,2,2,3,3,3,true\n3,2,4,10,19,,true\n");
    }
}
