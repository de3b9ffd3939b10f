use std::collections::BTreeMap;
use std::io::Write;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

use crate::error::Result;

pub const SCHEMA: &str = "netspace-report/1";

/// An exponent as JSON: a number, or the string "inf" (JSON has no infinity).
pub fn exponent_json(x: f64) -> Value {
    if x.is_infinite() {
        Value::String("inf".into())
    } else {
        serde_json::json!(x)
    }
}

/// Relative slack on declared bounds.
pub const BOUND_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub function: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub violation: bool,
    /// Set when the row's LHS is a heuristic lower bound.
    pub lower_bound: bool,
    /// Auxiliary per-row quantities (intermediate norms, cross-checks).
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub extra: BTreeMap<String, f64>,
}

impl ReportRow {
    pub fn new(function: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        ReportRow {
            function: function.into(),
            lhs,
            rhs,
            ratio: crate::numeric::safe_ratio(lhs, rhs),
            violation: false,
            lower_bound: false,
            extra: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.extra.insert(key.to_string(), value);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

/// Empirical constant at one truncation size.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendPoint {
    pub size: f64,
    pub empirical_constant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stability {
    pub points: Vec<TrendPoint>,
    /// max/min of the empirical constants.
    pub spread: f64,
    pub threshold: f64,
    pub stable: bool,
}

impl Stability {
    pub fn new(points: Vec<TrendPoint>, threshold: f64) -> Self {
        let lo = points.iter().map(|p| p.empirical_constant).fold(f64::INFINITY, f64::min);
        let hi = points.iter().map(|p| p.empirical_constant).fold(0.0, f64::max);
        let spread = if points.is_empty() { 1.0 } else { crate::numeric::safe_ratio(hi, lo) };
        Stability { points, spread, threshold, stable: spread <= threshold }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema: &'static str,
    pub inequality_id: String,
    pub corpus: String,
    pub parameters: Value,
    /// Averaging engine used on the LHS, if any.
    pub engine: Option<String>,
    pub rows: Vec<ReportRow>,
    pub empirical_constant: f64,
    /// The bound a ratio must not exceed, where the theory supplies one.
    pub declared_bound: Option<f64>,
    /// Relative slack allowed above `declared_bound`.
    pub bound_tolerance: f64,
    pub violations: Vec<String>,
    /// Rows whose heuristic LHS exceeded the bound and could not be rerun exactly.
    pub inconclusive: Vec<String>,
    pub stability: Option<Stability>,
    pub status: Status,
    /// Effective run configuration, filled in by the caller.
    pub config: Value,
    #[serde(skip)]
    pub runtime: Duration,
}

impl VerificationReport {
    /// Assembles a report and derives the summary fields from the rows.
    pub fn new(
        inequality_id: &str,
        corpus: String,
        parameters: Value,
        engine: Option<String>,
        declared_bound: Option<f64>,
        rows: Vec<ReportRow>,
    ) -> Self {
        Self::with_tolerance(inequality_id, corpus, parameters, engine, declared_bound, BOUND_TOLERANCE, rows)
    }

    pub fn with_tolerance(
        inequality_id: &str,
        corpus: String,
        parameters: Value,
        engine: Option<String>,
        declared_bound: Option<f64>,
        bound_tolerance: f64,
        mut rows: Vec<ReportRow>,
    ) -> Self {
        let mut violations = Vec::new();
        let mut inconclusive = Vec::new();
        for row in &mut rows {
            if let Some(b) = declared_bound {
                if row.ratio > b * (1.0 + bound_tolerance) {
                    if row.lower_bound {
                        inconclusive.push(row.function.clone());
                    } else {
                        row.violation = true;
                    }
                }
            }
            if row.violation {
                violations.push(row.function.clone());
            }
        }
        let empirical_constant = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
        let mut report = VerificationReport {
            schema: SCHEMA,
            inequality_id: inequality_id.to_string(),
            corpus,
            parameters,
            engine,
            rows,
            empirical_constant,
            declared_bound,
            bound_tolerance,
            violations,
            inconclusive,
            stability: None,
            status: Status::Pass,
            config: Value::Null,
            runtime: Duration::ZERO,
        };
        report.update_status();
        report
    }

    pub fn with_stability(mut self, stability: Stability) -> Self {
        self.stability = Some(stability);
        self.update_status();
        self
    }

    fn update_status(&mut self) {
        let unstable = self.stability.as_ref().is_some_and(|s| !s.stable);
        self.status = if !self.violations.is_empty() || unstable {
            Status::Fail
        } else if !self.inconclusive.is_empty() {
            Status::Inconclusive
        } else {
            Status::Pass
        };
    }

    /// Pretty JSON with keys sorted at every level.
    pub fn to_json(&self) -> Result<String> {
        let value = serde_json::to_value(self)?;
        Ok(serde_json::to_string_pretty(&value)? + "\n")
    }

    /// Per-row CSV: function, lhs, rhs, ratio, violation.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["function", "lhs", "rhs", "ratio", "violation"])?;
        for r in &self.rows {
            w.write_record([
                r.function.clone(),
                r.lhs.to_string(),
                r.rhs.to_string(),
                r.ratio.to_string(),
                r.violation.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn summary_fields() {
        let rows = vec![ReportRow::new("a", 1.0, 2.0), ReportRow::new("b", 3.0, 2.0), ReportRow::new("c", 0.0, 0.0)];
        let r = VerificationReport::new("x", "deterministic".into(), json!({"p": 2}), None, Some(1.0), rows);
        assert_eq!(r.empirical_constant, 1.5);
        assert_eq!(r.violations, vec!["b".to_string()]);
        assert_eq!(r.status, Status::Fail);
        assert_eq!(r.rows[2].ratio, 0.0);
    }

    #[test]
    fn heuristic_excess_is_inconclusive() {
        let mut row = ReportRow::new("h", 3.0, 1.0);
        row.lower_bound = true;
        let r = VerificationReport::new("x", "c".into(), Value::Null, None, Some(1.0), vec![row]);
        assert!(r.violations.is_empty());
        assert_eq!(r.inconclusive, vec!["h".to_string()]);
        assert_eq!(r.status, Status::Inconclusive);
    }

    #[test]
    fn json_keys_sorted_and_runtime_excluded() {
        let mut r = VerificationReport::new("x", "c".into(), json!({"z": 1, "a": 2}), None, None, vec![]);
        r.runtime = Duration::from_secs(3);
        let text = r.to_json().unwrap();
        assert!(text.contains("\"schema\": \"netspace-report/1\""));
        assert!(!text.contains("runtime"));
        let a = text.find("\"a\"").unwrap();
        let z = text.find("\"z\"").unwrap();
        assert!(a < z);
        assert!(text.find("\"config\"").unwrap() < text.find("\"corpus\"").unwrap());
    }

    #[test]
    fn csv_quotes_fields() {
        let r = VerificationReport::new(
            "x",
            "c".into(),
            Value::Null,
            None,
            None,
            vec![ReportRow::new("f,1", 1.0, 1.0)],
        );
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "function,lhs,rhs,ratio,violation\n\"f,1\",1,1,1,false\n");
    }

    #[test]
    fn stability_spread() {
        let s = Stability::new(
            vec![TrendPoint { size: 10.0, empirical_constant: 2.0 }, TrendPoint { size: 20.0, empirical_constant: 2.5 }],
            1.5,
        );
        assert_eq!(s.spread, 1.25);
        assert!(s.stable);
        let r = VerificationReport::new("x", "c".into(), Value::Null, None, None, vec![])
            .with_stability(Stability::new(
                vec![TrendPoint { size: 1.0, empirical_constant: 1.0 }, TrendPoint { size: 2.0, empirical_constant: 3.0 }],
                1.5,
            ));
        assert_eq!(r.status, Status::Fail);
    }
}
