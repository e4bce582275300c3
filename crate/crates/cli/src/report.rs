//! Verification reports and the fixed-precision writers.
//!
//! JSON numbers carry 17 significant digits, CSV numbers 12, both in scientific
//! notation, so identical inputs give byte-identical files.

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::config::{Format, RunConfig};

/// A real printed at 17 significant digits; non-finite values become null.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

// −0 prints as 0
pub fn json_number(x: f64) -> String {
    let x = x + 0.0;
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".into()
    }
}

pub fn csv_number(x: f64) -> String {
    let x = x + 0.0;
    if x.is_finite() {
        format!("{x:.11e}")
    } else {
        "nan".into()
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let raw = RawValue::from_string(json_number(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Param {
    Real(f64),
    Int(i64),
    Text(String),
}

impl Param {
    fn csv(&self) -> String {
        match self {
            Param::Real(x) => csv_number(*x),
            Param::Int(i) => i.to_string(),
            Param::Text(t) => t.clone(),
        }
    }
}

impl Serialize for Param {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Param::Real(x) => Num(*x).serialize(s),
            Param::Int(i) => s.serialize_i64(*i),
            Param::Text(t) => s.serialize_str(t),
        }
    }
}

impl From<f64> for Param {
    fn from(x: f64) -> Self {
        Param::Real(x)
    }
}

impl From<i64> for Param {
    fn from(x: i64) -> Self {
        Param::Int(x)
    }
}

impl From<usize> for Param {
    fn from(x: usize) -> Self {
        Param::Int(x as i64)
    }
}

impl From<&str> for Param {
    fn from(x: &str) -> Self {
        Param::Text(x.into())
    }
}

/// Ordered key/value pairs serialized as a JSON object.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Params(pub Vec<(String, Param)>);

impl Params {
    pub fn with(mut self, k: &str, v: impl Into<Param>) -> Self {
        self.0.push((k.into(), v.into()));
        self
    }

    fn csv(&self) -> String {
        self.0.iter().map(|(k, v)| format!("{k}={}", v.csv())).collect::<Vec<_>>().join(";")
    }
}

impl Serialize for Params {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub parameters: Params,
    pub achieved_error: Num,
    pub tolerance: Num,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckRecord {
    /// Pass exactly when achieved ≤ tolerance; NaN fails.
    pub fn new(name: impl Into<String>, parameters: Params, achieved: f64, tolerance: f64) -> Self {
        let status = if achieved <= tolerance { Status::Pass } else { Status::Fail };
        Self {
            name: name.into(),
            parameters,
            achieved_error: Num(achieved),
            tolerance: Num(tolerance),
            status,
            note: None,
        }
    }

    /// A check whose computation itself failed.
    pub fn errored(name: impl Into<String>, parameters: Params, tolerance: f64, err: impl ToString) -> Self {
        let mut r = Self::new(name, parameters, f64::NAN, tolerance);
        r.note = Some(err.to_string());
        r
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub suite: String,
    pub config: Params,
    pub checks: usize,
    pub failed: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<Num>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub meta: Meta,
    pub records: Vec<CheckRecord>,
}

impl VerificationReport {
    pub fn new(suite: &str, cfg: &RunConfig, records: Vec<CheckRecord>, wall_time: Option<f64>) -> Self {
        let mut config = Params::default();
        for (k, v) in cfg.echo() {
            config = config.with(k, v.as_str());
        }
        let failed = records.iter().filter(|r| r.status == Status::Fail).count();
        Self {
            meta: Meta {
                tool: "msf",
                version: env!("CARGO_PKG_VERSION"),
                suite: suite.into(),
                config,
                checks: records.len(),
                failed,
                wall_time_s: wall_time.map(Num),
            },
            records,
        }
    }

    pub fn passed(&self) -> bool {
        self.meta.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.records.iter().filter(|r| r.status == Status::Fail)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = String::from("suite,name,parameters,achieved_error,tolerance,status\n");
                for r in &self.records {
                    s.push_str(&format!(
                        "{},{},{},{},{},{}\n",
                        self.meta.suite,
                        r.name,
                        r.parameters.csv(),
                        csv_number(r.achieved_error.0),
                        csv_number(r.tolerance.0),
                        if r.status == Status::Pass { "pass" } else { "fail" }
                    ));
                }
                s
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_follows_tolerance() {
        assert_eq!(CheckRecord::new("a", Params::default(), 1e-11, 1e-10).status, Status::Pass);
        assert_eq!(CheckRecord::new("a", Params::default(), 1e-9, 1e-10).status, Status::Fail);
        assert_eq!(CheckRecord::new("a", Params::default(), f64::NAN, 1.0).status, Status::Fail);
    }

    #[test]
    fn fixed_digit_numbers() {
        assert_eq!(json_number(0.1), "1.0000000000000001e-1");
        assert_eq!(csv_number(-2.5), "-2.50000000000e0");
        assert_eq!(json_number(f64::NAN), "null");
        assert_eq!(csv_number(-0.0), "0.00000000000e0");
        let r = CheckRecord::new("x", Params::default().with("n", 3usize).with("u", 0.5), 0.0, 1e-12);
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(
            s,
            r#"{"name":"x","parameters":{"n":3,"u":5.0000000000000000e-1},"achieved_error":0.0000000000000000e0,"tolerance":9.9999999999999998e-13,"status":"pass"}"#
        );
    }
}
