use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use super::svg::render_svg;
use super::sweep::{ReportRow, SpeedupReport};
use crate::error::ReportError;

/// Writes `rows` as CSV with a header line, even when `rows` is empty.
pub fn write_rows<T: Serialize, W: Write>(
    rows: &[T],
    header: &[&str],
    out: W,
) -> Result<(), ReportError> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows<T: DeserializeOwned, R: Read>(input: R) -> Result<Vec<T>, ReportError> {
    let mut r = csv::Reader::from_reader(input);
    Ok(r.deserialize().collect::<Result<Vec<T>, _>>()?)
}

pub const ROW_COLUMNS: [&str; 15] = [
    "benchmark",
    "dist",
    "scheme",
    "M",
    "K",
    "W_S",
    "W_NC",
    "rho",
    "delta",
    "T_baseline",
    "T_compiler",
    "T_combined",
    "compiler_speedup",
    "hardware_speedup",
    "combined_speedup",
];

pub const EVENT_COLUMNS: [&str; 11] = [
    "benchmark",
    "dist",
    "scheme",
    "M",
    "analytic_baseline",
    "event_baseline",
    "analytic_compiler",
    "event_compiler",
    "analytic_combined",
    "event_combined",
    "max_group",
];

pub const AVERAGE_COLUMNS: [&str; 10] = [
    "dist",
    "scheme",
    "M",
    "K",
    "W_S",
    "W_NC",
    "benchmarks",
    "compiler_speedup",
    "hardware_speedup",
    "combined_speedup",
];

pub const FAILURE_COLUMNS: [&str; 5] = ["benchmark", "dist", "scheme", "M", "error"];

pub fn emit_csv<W: Write>(report: &SpeedupReport, out: W) -> Result<(), ReportError> {
    write_rows(&report.rows, &ROW_COLUMNS, out)
}

pub fn read_csv<R: Read>(input: R) -> Result<Vec<ReportRow>, ReportError> {
    read_rows(input)
}

fn create(dir: &Path, name: &str) -> Result<File, ReportError> {
    Ok(File::create(dir.join(name))?)
}

/// Writes `speedups.csv`, `averages.csv`, `event_times.csv`, `failures.csv`
/// and, when there is at least one row, `speedups.svg` into `dir`.
pub fn write_report(report: &SpeedupReport, dir: &Path) -> Result<(), ReportError> {
    std::fs::create_dir_all(dir)?;
    emit_csv(report, create(dir, "speedups.csv")?)?;
    write_rows(
        &report.averages,
        &AVERAGE_COLUMNS,
        create(dir, "averages.csv")?,
    )?;
    write_rows(
        &report.events,
        &EVENT_COLUMNS,
        create(dir, "event_times.csv")?,
    )?;
    write_rows(
        &report.failures,
        &FAILURE_COLUMNS,
        create(dir, "failures.csv")?,
    )?;
    if !report.rows.is_empty() {
        let svg = render_svg(report)?;
        create(dir, "speedups.svg")?.write_all(svg.as_bytes())?;
    }
    Ok(())
}
