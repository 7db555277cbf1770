use super::{output, read_text, TableFormat};
use crate::exit::{CmdResult, Failure};
use std::io::Write;
use std::path::PathBuf;
use tabforge_core::tablecore::remove_implicit_from_structure;
use tabforge_core::{
    cells_to_matrix, detect_implicit, matrix_to_cells, parse_table_html, structure_to_html, validate_matrix, CellMatrix,
    EmitMode, TableStructure,
};

#[derive(Debug, clap::Args)]
pub struct Args {
    pub input: PathBuf,
    /// Input format; inferred from the extension when omitted.
    #[arg(long, value_enum)]
    pub from: Option<TableFormat>,
    #[arg(long, value_enum)]
    pub to: TableFormat,
    /// Write empty cells when emitting HTML.
    #[arg(long)]
    pub structural_only: bool,
    /// Drop implicit rows and columns instead of refusing to convert.
    #[arg(long)]
    pub repair: bool,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn findings(e: impl std::fmt::Display) -> Failure {
    Failure::Findings(e.to_string())
}

fn load(text: &str, format: TableFormat) -> Result<TableStructure, Failure> {
    match format {
        TableFormat::Matrix => {
            let m: CellMatrix = text.parse().map_err(findings)?;
            let report = validate_matrix(&m);
            if let Some(v) = report.violations.first() {
                return Err(Failure::Findings(format!(
                    "matrix is not well formed: {} at ({},{}): {}",
                    v.rule, v.row, v.col, v.message
                )));
            }
            matrix_to_cells(&m).map_err(findings)
        }
        TableFormat::Html => parse_table_html(text).map(|d| d.structure).map_err(findings),
    }
}

pub fn run(args: Args) -> CmdResult {
    let from = TableFormat::resolve(args.from, &args.input)?;
    let text = read_text(&args.input)?;
    let mut s = load(&text, from)?;
    if args.repair {
        s = remove_implicit_from_structure(&s).map_err(findings)?;
    }
    let rendered = match args.to {
        TableFormat::Matrix => {
            let m = cells_to_matrix(&s).map_err(findings)?;
            let imp = detect_implicit(&m).map_err(findings)?;
            if !imp.is_clean() {
                return Err(Failure::Findings(format!(
                    "table has implicit rows {:?} and columns {:?}; pass --repair to drop them",
                    imp.implicit_rows, imp.implicit_cols
                )));
            }
            m.to_text()
        }
        TableFormat::Html => {
            let mode = if args.structural_only || from == TableFormat::Matrix {
                EmitMode::StructuralOnly
            } else {
                EmitMode::WithContent
            };
            structure_to_html(&s, mode).map_err(findings)?
        }
    };
    let mut w = output(args.out.as_deref())?;
    writeln!(w, "{rendered}")
        .and_then(|_| w.flush())
        .map_err(|e| Failure::External(format!("write failed: {e}")))
}
