use super::{emit_line, finish, output, TableFormat};
use crate::exit::{CmdResult, Failure};
use serde::Serialize;
use std::path::PathBuf;
use tabforge_core::tablecore::Violation;
use tabforge_core::{cells_to_matrix, detect_implicit, parse_table_html, validate_matrix, CellMatrix};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Matrix (.txt) or HTML (.html) files.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Input format; inferred from the extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<TableFormat>,
}

#[derive(Debug, Serialize)]
struct Report {
    input: String,
    format: TableFormat,
    valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_rows: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    n_cols: Option<usize>,
    violations: Vec<Violation>,
    implicit_rows: Vec<usize>,
    implicit_cols: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn check_matrix(report: &mut Report, m: &CellMatrix) {
    report.n_rows = Some(m.rows());
    report.n_cols = Some(m.cols());
    let v = validate_matrix(m);
    report.valid = v.is_valid();
    report.violations = v.violations;
    if let Ok(imp) = detect_implicit(m) {
        report.implicit_rows = imp.implicit_rows;
        report.implicit_cols = imp.implicit_cols;
    }
}

fn check(text: &str, report: &mut Report) {
    match report.format {
        TableFormat::Matrix => match text.parse::<CellMatrix>() {
            Ok(m) => check_matrix(report, &m),
            Err(e) => report.error = Some(e.to_string()),
        },
        TableFormat::Html => match parse_table_html(text).map_err(|e| e.to_string()).and_then(|doc| {
            cells_to_matrix(&doc.structure).map_err(|e| e.to_string())
        }) {
            Ok(m) => check_matrix(report, &m),
            Err(e) => report.error = Some(e),
        },
    }
}

fn describe(r: &Report) -> String {
    let mut s = format!("{}: ", r.input);
    if let Some(e) = &r.error {
        s.push_str(&format!("invalid ({e})"));
        return s;
    }
    let dims = format!("{}x{}", r.n_rows.unwrap_or(0), r.n_cols.unwrap_or(0));
    if r.valid {
        s.push_str(&format!("valid {dims}"));
    } else {
        s.push_str(&format!("invalid {dims}"));
        for v in &r.violations {
            s.push_str(&format!("\n  {} at ({},{}): {}", v.rule, v.row, v.col, v.message));
        }
    }
    if !r.implicit_rows.is_empty() {
        s.push_str(&format!("\n  implicit rows {:?}", r.implicit_rows));
    }
    if !r.implicit_cols.is_empty() {
        s.push_str(&format!("\n  implicit columns {:?}", r.implicit_cols));
    }
    s
}

pub fn run(args: Args) -> CmdResult {
    // Resolve every format up front so usage errors come before any output.
    let formats = args
        .inputs
        .iter()
        .map(|p| TableFormat::resolve(args.format, p))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = output(None)?;
    let mut invalid = 0;
    let mut unreadable = Vec::new();
    for (path, format) in args.inputs.iter().zip(formats) {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("{}: unreadable ({e})", path.display());
                unreadable.push(path.display().to_string());
                continue;
            }
        };
        let mut report = Report {
            input: path.display().to_string(),
            format,
            valid: false,
            n_rows: None,
            n_cols: None,
            violations: Vec::new(),
            implicit_rows: Vec::new(),
            implicit_cols: Vec::new(),
            error: None,
        };
        check(&text, &mut report);
        eprintln!("{}", describe(&report));
        if !report.valid {
            invalid += 1;
        }
        emit_line(&mut out, &report)?;
    }
    finish(out)?;
    if !unreadable.is_empty() {
        return Err(Failure::External(format!("cannot read {}", unreadable.join(", "))));
    }
    if invalid > 0 {
        return Err(Failure::Findings(format!("{invalid} of {} input(s) invalid", args.inputs.len())));
    }
    Ok(())
}
