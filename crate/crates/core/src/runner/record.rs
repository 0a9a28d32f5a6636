//! One row per (run, step, metric), as CSV.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::RunnerError;

pub const CSV_HEADER: [&str; 5] = ["run_id", "seed", "step", "metric", "value"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricRecord {
    pub run_id: String,
    pub seed: u64,
    pub step: u64,
    pub metric: String,
    pub value: f64,
}

/// Rounds to nine significant digits and prints in plain decimal notation.
pub fn round_sig(value: f64) -> f64 {
    if !value.is_finite() || value == 0.0 {
        return value;
    }
    format!("{value:.8e}").parse().expect("formatted float parses")
}

pub fn format_value(value: f64) -> String {
    let v = round_sig(value);
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v}")
    }
}

pub fn write_records<W: Write>(out: W, records: &[MetricRecord]) -> Result<(), RunnerError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.write_record([
            r.run_id.as_str(),
            &r.seed.to_string(),
            &r.step.to_string(),
            r.metric.as_str(),
            &format_value(r.value),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn read_records<R: Read>(input: R) -> Result<Vec<MetricRecord>, RunnerError> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(RunnerError::Plot(format!(
            "unexpected CSV header `{}`; expected `{}`",
            header.join(","),
            CSV_HEADER.join(",")
        )));
    }
    r.deserialize().map(|row| row.map_err(RunnerError::from)).collect()
}
