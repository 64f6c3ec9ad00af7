//! JSON and CSV serialization of scan reports.
//!
//! The CSV has one row per frame in index order, ready to plot as similarity
//! curves: `index,orb,ssim,hash_distance,flagged_orb,flagged_ssim,flagged_hash`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::scan::ScanReport;
use crate::{Error, Result};

pub const CSV_HEADER: [&str; 7] =
    ["index", "orb", "ssim", "hash_distance", "flagged_orb", "flagged_ssim", "flagged_hash"];

pub fn to_json(report: &ScanReport) -> Result<String> {
    Ok(serde_json::to_string_pretty(report)?)
}

pub fn write_json(report: &ScanReport, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, report)?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

pub fn read_json(path: &Path) -> Result<ScanReport> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_reader(std::io::BufReader::new(file))?)
}

pub fn write_csv_to<W: Write>(report: &ScanReport, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    let mut records: Vec<_> = report.records.iter().collect();
    records.sort_by_key(|r| r.index);
    for r in records {
        w.serialize(r)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_csv(report: &ScanReport, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv_to(report, BufWriter::new(file))
}

/// Writes whichever of the two reports has a destination.
pub fn emit_report(report: &ScanReport, json_path: Option<&Path>, csv_path: Option<&Path>) -> Result<()> {
    if let Some(p) = json_path {
        write_json(report, p)?;
    }
    if let Some(p) = csv_path {
        write_csv(report, p)?;
    }
    Ok(())
}
