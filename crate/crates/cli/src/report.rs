//! Serialization of identity-suite results.
//!
//! JSON writes non-finite errors as `null`; they read back as +∞. CSV holds
//! one row per check with the params map as an embedded JSON object and
//! every float in `{:.16e}` form (17 significant digits, exact round-trip).

use std::collections::BTreeMap;
use std::fmt;

use cavityqed::verify::SuiteReport;
use serde::{Deserialize, Deserializer, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug)]
pub enum ReportError {
    Json(serde_json::Error),
    Csv(csv::Error),
    Malformed(String),
}

impl fmt::Display for ReportError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReportError::Json(e) => write!(f, "JSON error: {e}"),
            ReportError::Csv(e) => write!(f, "CSV error: {e}"),
            ReportError::Malformed(m) => write!(f, "malformed report: {m}"),
        }
    }
}

impl std::error::Error for ReportError {}

impl From<serde_json::Error> for ReportError {
    fn from(e: serde_json::Error) -> Self {
        ReportError::Json(e)
    }
}

impl From<csv::Error> for ReportError {
    fn from(e: csv::Error) -> Self {
        ReportError::Csv(e)
    }
}

/// One serialized check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub params: BTreeMap<String, f64>,
    #[serde(deserialize_with = "null_as_inf")]
    pub abs_err: f64,
    #[serde(deserialize_with = "null_as_inf")]
    pub rel_err: f64,
    pub pass: bool,
    pub tol_abs: f64,
    pub tol_rel: f64,
}

/// The serialized form of a suite run. CSV does not carry the header
/// fields, so a CSV parse fills `suite` and `seed` from the caller and
/// recomputes `all_pass`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub suite: String,
    pub seed: u64,
    pub all_pass: bool,
    pub checks: Vec<CheckRecord>,
}

fn null_as_inf<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
}

impl ReportDocument {
    pub fn from_suite(report: &SuiteReport) -> Self {
        let checks = report
            .reports
            .iter()
            .map(|r| CheckRecord {
                id: r.check_id.as_str().to_string(),
                params: r.params.clone(),
                abs_err: r.abs_err,
                rel_err: r.rel_err,
                pass: r.pass,
                tol_abs: r.tol_used.abs_tol,
                tol_rel: r.tol_used.rel_tol,
            })
            .collect();
        ReportDocument {
            suite: report.suite.clone(),
            seed: report.seed,
            all_pass: report.all_pass,
            checks,
        }
    }
}

pub const CSV_HEADER: [&str; 7] = ["id", "params", "abs_err", "rel_err", "pass", "tol_abs", "tol_rel"];

/// Float in 17-significant-digit scientific notation.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

pub fn emit_report(doc: &ReportDocument, format: Format) -> Result<Vec<u8>, ReportError> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(doc)?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_HEADER)?;
            for c in &doc.checks {
                let params = serde_json::to_string(&c.params)?;
                w.write_record([
                    c.id.clone(),
                    params,
                    num(c.abs_err),
                    num(c.rel_err),
                    c.pass.to_string(),
                    num(c.tol_abs),
                    num(c.tol_rel),
                ])?;
            }
            w.into_inner().map_err(|e| ReportError::Malformed(e.to_string()))
        }
    }
}

pub fn parse_report(bytes: &[u8], format: Format, suite: &str, seed: u64) -> Result<ReportDocument, ReportError> {
    match format {
        Format::Json => Ok(serde_json::from_slice(bytes)?),
        Format::Csv => {
            let mut r = csv::Reader::from_reader(bytes);
            if r.headers()?.iter().ne(CSV_HEADER) {
                return Err(ReportError::Malformed("unexpected CSV header".into()));
            }
            let mut checks = Vec::new();
            for row in r.records() {
                let row = row?;
                let field = |i: usize| row.get(i).unwrap_or_default();
                let float = |i: usize| {
                    field(i)
                        .parse::<f64>()
                        .map_err(|e| ReportError::Malformed(format!("column {}: {e}", CSV_HEADER[i])))
                };
                checks.push(CheckRecord {
                    id: field(0).to_string(),
                    params: serde_json::from_str(field(1))?,
                    abs_err: float(2)?,
                    rel_err: float(3)?,
                    pass: field(4)
                        .parse()
                        .map_err(|e| ReportError::Malformed(format!("column pass: {e}")))?,
                    tol_abs: float(5)?,
                    tol_rel: float(6)?,
                });
            }
            let all_pass = checks.iter().all(|c| c.pass);
            Ok(ReportDocument {
                suite: suite.to_string(),
                seed,
                all_pass,
                checks,
            })
        }
    }
}
