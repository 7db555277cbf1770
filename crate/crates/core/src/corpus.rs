//! Annotation corpora: loading PubTabNet-style JSONL or directories of HTML
//! tables, a dimension index for sourcing blocks, and the implicit-line
//! audit.

use crate::htmlcodec::parse_table_html;
use crate::tablecore::{cells_to_matrix, detect_implicit, remove_implicit_from_structure, CellMatrix, TableStructure};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {message}")]
    UnreadablePath { path: String, message: String },
    #[error("corpus is empty ({skipped} records skipped)")]
    EmptyCorpus { skipped: usize },
    #[error("no corpus table is at least {min_rows}x{min_cols} (largest dims: {max_rows} rows, {max_cols} cols)")]
    NoCompatibleSource {
        min_rows: usize,
        min_cols: usize,
        max_rows: usize,
        max_cols: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CorpusFormat {
    PubtabnetJsonl,
    HtmlDir,
}

impl CorpusFormat {
    /// Directories hold HTML files; anything else is read as JSONL.
    pub fn detect(path: &Path) -> CorpusFormat {
        if path.is_dir() {
            CorpusFormat::HtmlDir
        } else {
            CorpusFormat::PubtabnetJsonl
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefectFlags {
    pub had_implicit_rows: bool,
    /// Implicit rows plus implicit columns found at ingestion.
    pub implicit_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusRecord {
    pub id: String,
    pub structure: TableStructure,
    pub matrix: CellMatrix,
    pub image_ref: Option<String>,
    pub defect_flags: DefectFlags,
}

impl CorpusRecord {
    /// Builds a record, optionally removing implicit lines from the
    /// structure. Defect flags always describe the input as given.
    pub fn new(id: impl Into<String>, structure: TableStructure, repair: bool) -> Result<Self, String> {
        let matrix = cells_to_matrix(&structure).map_err(|e| e.to_string())?;
        let report = detect_implicit(&matrix).map_err(|e| e.to_string())?;
        let defect_flags = DefectFlags {
            had_implicit_rows: !report.implicit_rows.is_empty(),
            implicit_count: report.implicit_rows.len() + report.implicit_cols.len(),
        };
        let (structure, matrix) = if repair && !report.is_clean() {
            let s = remove_implicit_from_structure(&structure).map_err(|e| e.to_string())?;
            let m = cells_to_matrix(&s).map_err(|e| e.to_string())?;
            (s, m)
        } else {
            (structure, matrix)
        };
        Ok(CorpusRecord {
            id: id.into(),
            structure,
            matrix,
            image_ref: None,
            defect_flags,
        })
    }

    pub fn dims(&self) -> (usize, usize) {
        self.matrix.dims()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedRecord {
    /// Line number or file name.
    pub location: String,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadOptions {
    /// Remove implicit rows and columns on ingestion.
    pub repair: bool,
}

/// Immutable set of records with an index by row count.
#[derive(Debug, Clone)]
pub struct Corpus {
    records: Vec<CorpusRecord>,
    skipped: Vec<SkippedRecord>,
    /// Row count to indices of records with that many rows.
    dim_index: BTreeMap<usize, Vec<usize>>,
}

impl Corpus {
    pub fn from_records(records: Vec<CorpusRecord>) -> Result<Self, CorpusError> {
        Self::with_skipped(records, Vec::new())
    }

    fn with_skipped(records: Vec<CorpusRecord>, skipped: Vec<SkippedRecord>) -> Result<Self, CorpusError> {
        if records.is_empty() {
            return Err(CorpusError::EmptyCorpus { skipped: skipped.len() });
        }
        let mut dim_index: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, r) in records.iter().enumerate() {
            dim_index.entry(r.dims().0).or_default().push(i);
        }
        Ok(Corpus {
            records,
            skipped,
            dim_index,
        })
    }

    pub fn records(&self) -> &[CorpusRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn skipped(&self) -> &[SkippedRecord] {
        &self.skipped
    }

    /// True when some record still has implicit rows or columns.
    pub fn has_implicit_lines(&self) -> bool {
        self.records.iter().any(|r| !is_clean(&r.matrix))
    }

    /// Copy with implicit rows and columns removed from every record. Defect
    /// flags keep describing the original input.
    pub fn repaired(&self) -> Corpus {
        let records = self
            .records
            .iter()
            .map(|r| {
                if is_clean(&r.matrix) {
                    return r.clone();
                }
                let mut fixed = CorpusRecord::new(r.id.clone(), r.structure.clone(), true).expect("record was valid");
                fixed.image_ref = r.image_ref.clone();
                fixed.defect_flags = r.defect_flags;
                fixed
            })
            .collect();
        Corpus::with_skipped(records, self.skipped.clone()).expect("non-empty")
    }

    pub fn get(&self, id: &str) -> Option<&CorpusRecord> {
        self.records.iter().find(|r| r.id == id)
    }

    /// Indices of records with at least `min_rows` rows and `min_cols`
    /// columns, in ascending order.
    pub fn compatible(&self, min_rows: usize, min_cols: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .dim_index
            .range(min_rows..)
            .flat_map(|(_, ids)| ids.iter().copied())
            .filter(|&i| self.records[i].dims().1 >= min_cols)
            .collect();
        out.sort_unstable();
        out
    }

    pub(crate) fn no_source(&self, min_rows: usize, min_cols: usize) -> CorpusError {
        CorpusError::NoCompatibleSource {
            min_rows,
            min_cols,
            max_rows: self.records.iter().map(|r| r.dims().0).max().unwrap_or(0),
            max_cols: self.records.iter().map(|r| r.dims().1).max().unwrap_or(0),
        }
    }
}

fn is_clean(m: &CellMatrix) -> bool {
    detect_implicit(m).map(|r| r.is_clean()).unwrap_or(false)
}

/// Uniform draw among records at least `min_rows` x `min_cols`.
pub fn sample_compatible<'c>(
    corpus: &'c Corpus,
    min_rows: usize,
    min_cols: usize,
    rng: &mut impl Rng,
) -> Result<&'c CorpusRecord, CorpusError> {
    let ids = corpus.compatible(min_rows, min_cols);
    if ids.is_empty() {
        return Err(corpus.no_source(min_rows, min_cols));
    }
    Ok(&corpus.records[ids[rng.random_range(0..ids.len())]])
}

#[derive(Deserialize)]
struct PtnLine {
    #[serde(default)]
    imgid: Option<serde_json::Value>,
    #[serde(default)]
    filename: Option<String>,
    html: PtnHtml,
}

#[derive(Deserialize)]
struct PtnHtml {
    structure: PtnTokens,
    cells: Vec<PtnTokens>,
}

#[derive(Deserialize)]
struct PtnTokens {
    tokens: Vec<String>,
}

/// Rebuilds table markup from structural tokens and per-cell content
/// tokens. Content goes after each `<td>` or after the `>` closing a
/// `<td ...` opening.
pub fn reassemble_html(structure: &[String], cells: &[Vec<String>]) -> Result<String, String> {
    let mut out = String::new();
    let has_table = structure.iter().any(|t| t.trim() == "<table>");
    if !has_table {
        out.push_str("<table>");
    }
    let mut next = 0;
    let mut in_cell_open = false;
    for tok in structure {
        out.push_str(tok);
        let t = tok.trim();
        let opens_cell = match t {
            "<td>" | "<th>" => true,
            "<td" | "<th" => {
                in_cell_open = true;
                false
            }
            ">" if in_cell_open => {
                in_cell_open = false;
                true
            }
            _ => false,
        };
        if opens_cell {
            let content = cells
                .get(next)
                .ok_or_else(|| format!("structure has more cells than the {} content entries", cells.len()))?;
            out.push_str(&content.concat());
            next += 1;
        }
    }
    if next != cells.len() {
        return Err(format!("{} content entries for {next} cells", cells.len()));
    }
    if !has_table {
        out.push_str("</table>");
    }
    Ok(out)
}

fn parse_ptn_line(line: &str, number: usize, opts: LoadOptions) -> Result<CorpusRecord, String> {
    let rec: PtnLine = serde_json::from_str(line).map_err(|e| e.to_string())?;
    let cells: Vec<Vec<String>> = rec.html.cells.into_iter().map(|c| c.tokens).collect();
    let html = reassemble_html(&rec.html.structure.tokens, &cells)?;
    let doc = parse_table_html(&html).map_err(|e| e.to_string())?;
    let id = match (&rec.filename, &rec.imgid) {
        (Some(f), _) => f.clone(),
        (None, Some(serde_json::Value::String(s))) => s.clone(),
        (None, Some(v)) => v.to_string(),
        (None, None) => format!("line-{number}"),
    };
    let mut record = CorpusRecord::new(id, doc.structure, opts.repair)?;
    record.image_ref = rec.filename;
    Ok(record)
}

fn unreadable(path: &Path, e: impl std::fmt::Display) -> CorpusError {
    CorpusError::UnreadablePath {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn collect(results: Vec<(String, Result<CorpusRecord, String>)>) -> Result<Corpus, CorpusError> {
    let mut records = Vec::new();
    let mut skipped = Vec::new();
    for (location, r) in results {
        match r {
            Ok(rec) => records.push(rec),
            Err(reason) => skipped.push(SkippedRecord { location, reason }),
        }
    }
    Corpus::with_skipped(records, skipped)
}

/// Loads a corpus. Malformed records are skipped and listed in
/// [`Corpus::skipped`].
pub fn load_annotations(path: &Path, format: CorpusFormat, opts: LoadOptions) -> Result<Corpus, CorpusError> {
    match format {
        CorpusFormat::PubtabnetJsonl => {
            let text = std::fs::read_to_string(path).map_err(|e| unreadable(path, e))?;
            let lines: Vec<(usize, &str)> = text
                .lines()
                .enumerate()
                .filter(|(_, l)| !l.trim().is_empty())
                .map(|(i, l)| (i + 1, l))
                .collect();
            let results = lines
                .par_iter()
                .map(|&(n, l)| (format!("line {n}"), parse_ptn_line(l, n, opts)))
                .collect();
            collect(results)
        }
        CorpusFormat::HtmlDir => {
            let mut files: Vec<_> = std::fs::read_dir(path)
                .map_err(|e| unreadable(path, e))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| {
                    p.is_file()
                        && p.extension()
                            .and_then(|e| e.to_str())
                            .is_some_and(|e| e.eq_ignore_ascii_case("html") || e.eq_ignore_ascii_case("htm"))
                })
                .collect();
            files.sort();
            let results = files
                .par_iter()
                .map(|p| {
                    let name = p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
                    let id = p.file_stem().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
                    let r = std::fs::read_to_string(p)
                        .map_err(|e| e.to_string())
                        .and_then(|text| parse_table_html(&text).map_err(|e| e.to_string()))
                        .and_then(|doc| CorpusRecord::new(id, doc.structure, opts.repair));
                    (name, r)
                })
                .collect();
            collect(results)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditEntry {
    pub id: String,
    pub n_rows: usize,
    pub n_cols: usize,
    pub implicit_rows: Vec<usize>,
    pub implicit_cols: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub total_records: usize,
    pub affected_records: usize,
    pub affected_fraction: f64,
    pub total_implicit_rows: usize,
    pub total_implicit_cols: usize,
    /// Affected records only, in corpus order.
    pub per_record: Vec<AuditEntry>,
}

pub fn audit_implicit(corpus: &Corpus) -> AuditReport {
    let per_record: Vec<AuditEntry> = corpus
        .records
        .iter()
        .filter_map(|r| {
            // Records hold valid matrices by construction.
            let rep = detect_implicit(&r.matrix).expect("corpus matrices are valid");
            (!rep.is_clean()).then(|| AuditEntry {
                id: r.id.clone(),
                n_rows: r.matrix.rows(),
                n_cols: r.matrix.cols(),
                implicit_rows: rep.implicit_rows,
                implicit_cols: rep.implicit_cols,
            })
        })
        .collect();
    let total = corpus.records.len();
    AuditReport {
        total_records: total,
        affected_records: per_record.len(),
        affected_fraction: per_record.len() as f64 / total as f64,
        total_implicit_rows: per_record.iter().map(|e| e.implicit_rows.len()).sum(),
        total_implicit_cols: per_record.iter().map(|e| e.implicit_cols.len()).sum(),
        per_record,
    }
}
