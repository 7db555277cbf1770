use super::{emit_line, finish, output};
use crate::exit::{CmdResult, Failure};
use serde::Serialize;
use std::path::PathBuf;
use tabforge_core::synth::dataset::{dataset_stats, DatasetError, DatasetStats, Histogram};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Directory written by `synthesize`.
    #[arg(long)]
    pub dataset: PathBuf,
}

#[derive(Serialize)]
struct SummaryLine<'a> {
    summary: Summary<'a>,
}

#[derive(Serialize)]
struct Summary<'a> {
    records: usize,
    mean_token_ratio: f64,
    mean_char_ratio: f64,
    cells: &'a Histogram,
    merged_cells: &'a Histogram,
    shape: &'a Histogram,
    token_ratio: &'a Histogram,
    char_ratio: &'a Histogram,
}

fn print_histogram(name: &str, h: &Histogram) {
    eprintln!("{name}:");
    for (k, v) in h {
        eprintln!("  {k:>9} {v:>6}");
    }
}

fn print_report(st: &DatasetStats) {
    eprintln!("{:<12} {:>5} {:>5} {:>6} {:>7} {:>11} {:>10}", "id", "rows", "cols", "cells", "merged", "token_ratio", "char_ratio");
    for r in &st.per_record {
        eprintln!(
            "{:<12} {:>5} {:>5} {:>6} {:>7} {:>11.4} {:>10.4}",
            r.id, r.n_rows, r.n_cols, r.cells, r.merged_cells, r.token_ratio, r.char_ratio
        );
    }
    print_histogram("cells", &st.cells);
    print_histogram("merged cells", &st.merged_cells);
    print_histogram("rows x cols", &st.shape);
    print_histogram("token ratio", &st.token_ratio);
    print_histogram("char ratio", &st.char_ratio);
    eprintln!(
        "{} record(s), mean token ratio {:.4}, mean char ratio {:.4}",
        st.records, st.mean_token_ratio, st.mean_char_ratio
    );
}

/// Per-record statistics as JSONL, then a line with the histograms.
pub fn run(args: Args) -> CmdResult {
    if !args.dataset.is_dir() {
        return Err(Failure::External(format!("{}: not a directory", args.dataset.display())));
    }
    if !args.dataset.join("records.jsonl").exists() {
        return Err(Failure::Findings(format!("{}: dataset has no records", args.dataset.display())));
    }
    let st = dataset_stats(&args.dataset).map_err(|e| match e {
        DatasetError::Empty => Failure::Findings(format!("{}: dataset has no records", args.dataset.display())),
        DatasetError::Io { .. } => Failure::External(e.to_string()),
        DatasetError::Parse { .. } | DatasetError::Record { .. } => Failure::Findings(e.to_string()),
    })?;
    print_report(&st);
    let mut out = output(None)?;
    for r in &st.per_record {
        emit_line(&mut out, r)?;
    }
    emit_line(
        &mut out,
        &SummaryLine {
            summary: Summary {
                records: st.records,
                mean_token_ratio: st.mean_token_ratio,
                mean_char_ratio: st.mean_char_ratio,
                cells: &st.cells,
                merged_cells: &st.merged_cells,
                shape: &st.shape,
                token_ratio: &st.token_ratio,
                char_ratio: &st.char_ratio,
            },
        },
    )?;
    finish(out)
}
