//! CSV and JSON persistence of experiment results.
//!
//! `records.csv` has one row per problem with the header
//!
//! ```text
//! distribution,sparsity,problem,problem_seed,qa_energy,mqc_energy,qaga_energy,
//! qaga_vs_qa,qaga_vs_mqc,stages,used_mqc_fallback,used_incumbent,wall_time_ms
//! ```
//!
//! (one line in the file). `wall_time_ms` is empty unless timing was
//! requested. `counts.csv` is long-format plot data with the header
//! `pairing,distribution,sparsity,outcome,count`, and `summary.json` holds the
//! configuration, the counts and any failures.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::{BenchError, CellCounts, ComparisonRecord, ExperimentAReport};

const RECORD_HEADER: [&str; 13] = [
    "distribution",
    "sparsity",
    "problem",
    "problem_seed",
    "qa_energy",
    "mqc_energy",
    "qaga_energy",
    "qaga_vs_qa",
    "qaga_vs_mqc",
    "stages",
    "used_mqc_fallback",
    "used_incumbent",
    "wall_time_ms",
];

fn csv_error(path: &str, e: impl std::fmt::Display) -> BenchError {
    BenchError::Csv {
        path: path.to_string(),
        message: e.to_string(),
    }
}

pub fn records_to_csv(records: &[ComparisonRecord]) -> Result<String, BenchError> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(RECORD_HEADER)
        .map_err(|e| csv_error("<memory>", e))?;
    for r in records {
        w.serialize(r).map_err(|e| csv_error("<memory>", e))?;
    }
    let bytes = w.into_inner().map_err(|e| csv_error("<memory>", e))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

pub fn read_records_csv(text: &str) -> Result<Vec<ComparisonRecord>, BenchError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| csv_error("<input>", e))?;
    if header.iter().ne(RECORD_HEADER.iter().copied()) {
        return Err(csv_error("<input>", "unexpected header"));
    }
    reader
        .deserialize()
        .map(|r| r.map_err(|e| csv_error("<input>", e)))
        .collect()
}

#[derive(Serialize)]
struct CountRow {
    pairing: super::Pairing,
    distribution: crate::ising::Distribution,
    sparsity: f64,
    outcome: &'static str,
    count: usize,
}

pub fn counts_to_csv(cells: &[CellCounts]) -> Result<String, BenchError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for c in cells {
        for (outcome, count) in [("win", c.wins), ("tie", c.ties), ("loss", c.losses)] {
            w.serialize(CountRow {
                pairing: c.pairing,
                distribution: c.distribution,
                sparsity: c.sparsity,
                outcome,
                count,
            })
            .map_err(|e| csv_error("<memory>", e))?;
        }
    }
    let bytes = w.into_inner().map_err(|e| csv_error("<memory>", e))?;
    let text = String::from_utf8(bytes).expect("CSV output is UTF-8");
    if text.is_empty() {
        return Ok("pairing,distribution,sparsity,outcome,count\n".into());
    }
    Ok(text)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PersistedFiles {
    pub records: PathBuf,
    pub counts: PathBuf,
    pub summary: PathBuf,
}

fn write(path: &Path, contents: &str) -> Result<(), BenchError> {
    fs::write(path, contents).map_err(|e| BenchError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Writes `records.csv`, `counts.csv` and `summary.json` into `dir`.
pub fn persist_results(
    report: &ExperimentAReport,
    dir: &Path,
) -> Result<PersistedFiles, BenchError> {
    fs::create_dir_all(dir).map_err(|e| BenchError::Io {
        path: dir.display().to_string(),
        message: e.to_string(),
    })?;
    let files = PersistedFiles {
        records: dir.join("records.csv"),
        counts: dir.join("counts.csv"),
        summary: dir.join("summary.json"),
    };
    write(&files.records, &records_to_csv(&report.records)?)?;
    write(&files.counts, &counts_to_csv(&report.cells)?)?;
    write(&files.summary, &report.summary_json())?;
    Ok(files)
}
