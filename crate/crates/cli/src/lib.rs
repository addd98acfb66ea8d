//! Batch front end for `qzeta-core`: builds cases from flags, runs them in
//! parallel and writes one report record per case.

pub mod cases;
pub mod grid;
pub mod literal;
pub mod record;

use qzeta_core::TruncationPolicy;
use rayon::prelude::*;

use cases::{run_case, Case};
use record::{Record, Status};

/// Runs every case and returns records ordered by `case_id`. Each case is
/// evaluated sequentially on one thread, so output does not depend on the
/// thread count.
pub fn run_all(cases: &[Case], policy: &TruncationPolicy) -> Vec<Record> {
    let mut records: Vec<Record> = cases.par_iter().map(|c| run_case(c, policy)).collect();
    records.sort_by(|a, b| a.case_id.cmp(&b.case_id));
    records
}

/// Worst status across records: usage 64, domain 2, tolerance 1, else 0.
pub fn exit_status(records: &[Record]) -> u8 {
    records.iter().map(|r| r.status).max().unwrap_or(Status::Passed).exit_code()
}
