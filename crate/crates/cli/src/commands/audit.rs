use super::{emit_line, finish, output, CorpusArgs};
use crate::exit::CmdResult;
use serde::Serialize;
use tabforge_core::audit_implicit;

#[derive(Debug, clap::Args)]
pub struct Args {
    #[command(flatten)]
    pub corpus: CorpusArgs,
}

#[derive(Serialize)]
struct Totals {
    total_records: usize,
    affected_records: usize,
    affected_fraction: f64,
    total_implicit_rows: usize,
    total_implicit_cols: usize,
}

#[derive(Serialize)]
struct SummaryLine {
    summary: Totals,
}

/// Affected records as JSONL, then one summary line. The corpus is read
/// without repair so defects stay visible.
pub fn run(args: Args) -> CmdResult {
    let corpus = args.corpus.load(false)?;
    let report = audit_implicit(&corpus);

    eprintln!("{:<10} {:>8} {:>10} {:>13} {:>13}", "records", "affected", "fraction", "implicit_rows", "implicit_cols");
    eprintln!(
        "{:<10} {:>8} {:>10.4} {:>13} {:>13}",
        report.total_records,
        report.affected_records,
        report.affected_fraction,
        report.total_implicit_rows,
        report.total_implicit_cols
    );
    for e in &report.per_record {
        eprintln!("  {} ({}x{}): rows {:?} cols {:?}", e.id, e.n_rows, e.n_cols, e.implicit_rows, e.implicit_cols);
    }

    let mut out = output(None)?;
    for e in &report.per_record {
        emit_line(&mut out, e)?;
    }
    emit_line(
        &mut out,
        &SummaryLine {
            summary: Totals {
                total_records: report.total_records,
                affected_records: report.affected_records,
                affected_fraction: report.affected_fraction,
                total_implicit_rows: report.total_implicit_rows,
                total_implicit_cols: report.total_implicit_cols,
            },
        },
    )?;
    finish(out)
}
