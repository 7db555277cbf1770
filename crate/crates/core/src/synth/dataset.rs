//! On-disk dataset layout and its summary statistics.
//!
//! ```text
//! out/
//!   records.jsonl          one RecordLine per record, in index order
//!   failures.jsonl         records that could not be produced
//!   summary.json
//!   render_manifest.json   accepted records only
//!   html/<id>.html         styled standalone document
//!   matrix/<id>.txt        matrix text
//! ```

use super::pipeline::{BlockSource, SynthRecord, ValidationOutcome};
use super::SynthError;
use crate::htmlcodec::token_economy;
use crate::render::{document_path, emit_document, render_manifest, RenderJob, StyleAugmentation};
use crate::tablecore::{matrix_to_cells, CellMatrix, TableStructure};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path} line {line}: {message}")]
    Parse { path: String, line: usize, message: String },
    #[error("record {id}: {message}")]
    Record { id: String, message: String },
    #[error("dataset has no records")]
    Empty,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> DatasetError + '_ {
    move |source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// A record as stored in `records.jsonl`, without markup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordLine {
    pub id: String,
    pub seed: u64,
    pub n_rows: usize,
    pub n_cols: usize,
    pub matrix: CellMatrix,
    pub style: StyleAugmentation,
    pub provenance: Vec<BlockSource>,
    pub validation: ValidationOutcome,
    pub document: String,
    pub matrix_file: String,
}

impl RecordLine {
    pub fn from_record(r: &SynthRecord) -> Self {
        RecordLine {
            id: r.id.clone(),
            seed: r.seed,
            n_rows: r.matrix.rows(),
            n_cols: r.matrix.cols(),
            matrix: r.matrix.clone(),
            style: r.style.clone(),
            provenance: r.provenance.clone(),
            validation: r.validation.clone(),
            document: document_path(&r.id),
            matrix_file: format!("matrix/{}.txt", r.id),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FailureLine {
    pub index: usize,
    pub error: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub requested: usize,
    pub written: usize,
    pub accepted: usize,
    pub rejected: usize,
    pub failed: usize,
    /// Generator calls across all written records.
    pub attempts: usize,
}

fn write_file(path: &Path, text: &str) -> Result<(), DatasetError> {
    std::fs::write(path, text).map_err(io_err(path))
}

/// Writes the dataset layout for a batch. Output depends only on the
/// records, so equal batches give byte-identical directories.
pub fn write_dataset(out_dir: &Path, results: &[Result<SynthRecord, SynthError>]) -> Result<DatasetSummary, DatasetError> {
    for sub in ["html", "matrix"] {
        let d = out_dir.join(sub);
        std::fs::create_dir_all(&d).map_err(io_err(&d))?;
    }
    let mut summary = DatasetSummary {
        requested: results.len(),
        ..Default::default()
    };
    let mut records = String::new();
    let mut failures = String::new();
    let mut accepted: Vec<(&str, TableStructure)> = Vec::new();
    for (index, result) in results.iter().enumerate() {
        let r = match result {
            Ok(r) => r,
            Err(e) => {
                summary.failed += 1;
                failures.push_str(&serde_json::to_string(&FailureLine { index, error: e.to_string() }).expect("serializes"));
                failures.push('\n');
                continue;
            }
        };
        let line = RecordLine::from_record(r);
        let markup = r.filled_html.as_deref().unwrap_or(&r.structural_html);
        let doc = emit_document(markup, &r.style).map_err(|e| DatasetError::Record {
            id: r.id.clone(),
            message: e.to_string(),
        })?;
        write_file(&out_dir.join(&line.document), &doc)?;
        write_file(&out_dir.join(&line.matrix_file), &format!("{}\n", r.matrix.to_text()))?;
        records.push_str(&serde_json::to_string(&line).expect("serializes"));
        records.push('\n');
        summary.written += 1;
        summary.attempts += r.validation.attempts;
        if r.validation.accepted {
            summary.accepted += 1;
            let s = matrix_to_cells(&r.matrix).map_err(|e| DatasetError::Record {
                id: r.id.clone(),
                message: e.to_string(),
            })?;
            accepted.push((&r.id, s));
        } else {
            summary.rejected += 1;
        }
    }
    write_file(&out_dir.join("records.jsonl"), &records)?;
    write_file(&out_dir.join("failures.jsonl"), &failures)?;
    let mut s = serde_json::to_string_pretty(&summary).expect("serializes");
    s.push('\n');
    write_file(&out_dir.join("summary.json"), &s)?;
    let jobs: Vec<RenderJob<'_>> = accepted.iter().map(|(id, s)| RenderJob { id, structure: s }).collect();
    render_manifest(&jobs, out_dir).map_err(io_err(out_dir))?;
    Ok(summary)
}

pub fn read_records(dir: &Path) -> Result<Vec<RecordLine>, DatasetError> {
    let path = dir.join("records.jsonl");
    let text = std::fs::read_to_string(&path).map_err(io_err(&path))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| DatasetError::Parse {
                path: path.display().to_string(),
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordStats {
    pub id: String,
    pub n_rows: usize,
    pub n_cols: usize,
    pub cells: usize,
    pub merged_cells: usize,
    pub token_ratio: f64,
    pub char_ratio: f64,
}

impl RecordStats {
    pub fn of(id: &str, m: &CellMatrix) -> Result<Self, DatasetError> {
        let err = |message: String| DatasetError::Record { id: id.into(), message };
        let s = matrix_to_cells(m).map_err(|e| err(e.to_string()))?;
        let econ = token_economy(m).map_err(|e| err(e.to_string()))?;
        Ok(RecordStats {
            id: id.into(),
            n_rows: m.rows(),
            n_cols: m.cols(),
            cells: s.cells.len(),
            merged_cells: s.cells.iter().filter(|c| c.is_spanning()).count(),
            token_ratio: econ.token_ratio(),
            char_ratio: econ.char_ratio(),
        })
    }
}

/// Counts keyed by value (integers) or by bucket lower bound (ratios, 0.05
/// wide), rendered as strings so the report serializes as a flat map.
pub type Histogram = BTreeMap<String, usize>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub records: usize,
    pub cells: Histogram,
    pub merged_cells: Histogram,
    pub shape: Histogram,
    pub token_ratio: Histogram,
    pub char_ratio: Histogram,
    pub mean_token_ratio: f64,
    pub mean_char_ratio: f64,
    pub per_record: Vec<RecordStats>,
}

fn int_key(v: usize) -> String {
    format!("{v:04}")
}

fn ratio_key(v: f64) -> String {
    format!("{:.2}", (v / 0.05).floor() * 0.05)
}

pub fn compute_stats(per_record: Vec<RecordStats>) -> Result<DatasetStats, DatasetError> {
    if per_record.is_empty() {
        return Err(DatasetError::Empty);
    }
    let mut st = DatasetStats {
        records: per_record.len(),
        cells: Histogram::new(),
        merged_cells: Histogram::new(),
        shape: Histogram::new(),
        token_ratio: Histogram::new(),
        char_ratio: Histogram::new(),
        mean_token_ratio: 0.0,
        mean_char_ratio: 0.0,
        per_record: Vec::new(),
    };
    for r in &per_record {
        *st.cells.entry(int_key(r.cells)).or_default() += 1;
        *st.merged_cells.entry(int_key(r.merged_cells)).or_default() += 1;
        *st.shape.entry(format!("{:03}x{:03}", r.n_rows, r.n_cols)).or_default() += 1;
        *st.token_ratio.entry(ratio_key(r.token_ratio)).or_default() += 1;
        *st.char_ratio.entry(ratio_key(r.char_ratio)).or_default() += 1;
    }
    let n = per_record.len() as f64;
    st.mean_token_ratio = per_record.iter().map(|r| r.token_ratio).sum::<f64>() / n;
    st.mean_char_ratio = per_record.iter().map(|r| r.char_ratio).sum::<f64>() / n;
    st.per_record = per_record;
    Ok(st)
}

pub fn dataset_stats(dir: &Path) -> Result<DatasetStats, DatasetError> {
    let per_record = read_records(dir)?
        .iter()
        .map(|r| RecordStats::of(&r.id, &r.matrix))
        .collect::<Result<Vec<_>, _>>()?;
    compute_stats(per_record)
}

/// Writes JSONL lines to `w`, one per item.
pub fn write_jsonl<T: Serialize>(mut w: impl Write, items: impl IntoIterator<Item = T>) -> std::io::Result<()> {
    for item in items {
        serde_json::to_writer(&mut w, &item).map_err(std::io::Error::other)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stats(id: &str, m: &str) -> RecordStats {
        RecordStats::of(id, &m.parse().unwrap()).unwrap()
    }

    #[test]
    fn record_stats_by_hand() {
        let r = stats("a", "CLC\nUXC\nCCC");
        assert_eq!((r.n_rows, r.n_cols, r.cells, r.merged_cells), (3, 3, 6, 1));
        // <tr>x3 + </tr>x3 + spanning cell (5 tokens) + 5 plain cells x2.
        assert!((r.token_ratio - 9.0 / 21.0).abs() < 1e-12);
    }

    #[test]
    fn histograms_tally() {
        let st = compute_stats(vec![stats("a", "CC\nCC"), stats("b", "CL\nCC"), stats("c", "CC\nCC")]).unwrap();
        assert_eq!(st.records, 3);
        assert_eq!(st.cells.get("0004"), Some(&2));
        assert_eq!(st.cells.get("0003"), Some(&1));
        assert_eq!(st.merged_cells.get("0001"), Some(&1));
        assert_eq!(st.shape.get("002x002"), Some(&3));
        assert_eq!(st.token_ratio.values().sum::<usize>(), 3);
        assert!(matches!(compute_stats(Vec::new()), Err(DatasetError::Empty)));
    }

    #[test]
    fn ratio_buckets() {
        assert_eq!(ratio_key(0.449), "0.40");
        assert_eq!(ratio_key(0.45), "0.45");
        assert_eq!(int_key(7), "0007");
    }
}
