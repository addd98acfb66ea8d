//! Report records and their JSON-lines / CSV encodings.

use std::collections::BTreeMap;
use std::io::Write;

use qzeta_core::{Complex64, Error};
use serde::Serialize;
use serde_json::Value;

/// Complex value as a two-field object.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cplx {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for Cplx {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

/// How a case ended, for the process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Passed,
    ToleranceFailure,
    DomainFailure,
    UsageFailure,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Passed => 0,
            Status::ToleranceFailure => 1,
            Status::DomainFailure => 2,
            Status::UsageFailure => 64,
        }
    }
}

/// One line of output. Every command emits this same field set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub case_id: String,
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub lhs: Option<Cplx>,
    pub rhs: Option<Cplx>,
    pub abs_diff: f64,
    pub error_estimate: f64,
    pub tolerance: f64,
    pub converged: bool,
    pub passed: bool,
    pub convention_note: String,
    pub error: Option<String>,
    #[serde(skip)]
    pub status: Status,
}

/// Numbers produced by a successful check.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub lhs: Complex64,
    pub rhs: Option<Complex64>,
    pub abs_diff: f64,
    pub error_estimate: f64,
    pub tolerance: f64,
    pub converged: bool,
    pub note: String,
}

fn non_negative(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x.abs()
    }
}

impl Record {
    pub fn from_outcome(case_id: String, command: &str, inputs: BTreeMap<String, Value>, o: Outcome) -> Self {
        let abs_diff = non_negative(o.abs_diff);
        let error_estimate = non_negative(o.error_estimate);
        let passed = o.converged && abs_diff <= o.tolerance.max(error_estimate);
        Self {
            case_id,
            command: command.to_string(),
            inputs,
            lhs: Some(o.lhs.into()),
            rhs: o.rhs.map(Cplx::from),
            abs_diff,
            error_estimate,
            tolerance: o.tolerance,
            converged: o.converged,
            passed,
            convention_note: o.note,
            error: None,
            status: if passed { Status::Passed } else { Status::ToleranceFailure },
        }
    }

    pub fn from_error(case_id: String, command: &str, inputs: BTreeMap<String, Value>, tolerance: f64, e: &Error) -> Self {
        let status = match e {
            Error::Argument(_) => Status::UsageFailure,
            _ => Status::DomainFailure,
        };
        Self {
            case_id,
            command: command.to_string(),
            inputs,
            lhs: None,
            rhs: None,
            abs_diff: 0.0,
            error_estimate: 0.0,
            tolerance,
            converged: false,
            passed: false,
            convention_note: e.to_string(),
            error: Some(e.kind().to_string()),
            status,
        }
    }
}

/// Output encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// CSV column order.
pub const CSV_HEADER: [&str; 14] = [
    "case_id",
    "command",
    "inputs",
    "lhs_re",
    "lhs_im",
    "rhs_re",
    "rhs_im",
    "abs_diff",
    "error_estimate",
    "tolerance",
    "converged",
    "passed",
    "convention_note",
    "error",
];

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn write_records<W: Write>(records: &[Record], format: Format, out: W) -> std::io::Result<()> {
    match format {
        Format::Json => {
            let mut out = out;
            for r in records {
                serde_json::to_writer(&mut out, r)?;
                out.write_all(b"\n")?;
            }
            out.flush()
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CSV_HEADER)?;
            for r in records {
                let inputs = serde_json::to_string(&r.inputs)?;
                w.write_record([
                    r.case_id.clone(),
                    r.command.clone(),
                    inputs,
                    opt(r.lhs.map(|z| z.re)),
                    opt(r.lhs.map(|z| z.im)),
                    opt(r.rhs.map(|z| z.re)),
                    opt(r.rhs.map(|z| z.im)),
                    r.abs_diff.to_string(),
                    r.error_estimate.to_string(),
                    r.tolerance.to_string(),
                    r.converged.to_string(),
                    r.passed.to_string(),
                    r.convention_note.clone(),
                    r.error.clone().unwrap_or_default(),
                ])?;
            }
            w.flush()
        }
    }
}
