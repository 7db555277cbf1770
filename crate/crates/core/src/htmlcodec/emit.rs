use super::lexer::escape_text;
use super::HtmlError;
use crate::tablecore::{CellMatrix, LogicalCell, TableStructure};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmitMode {
    /// Every `<td>` is written empty.
    StructuralOnly,
    WithContent,
}

/// Number of leading rows that form a header block: every cell anchored in
/// them is a header cell and none of them reaches below the block.
pub fn header_block_rows(s: &TableStructure) -> usize {
    let mut best = 0;
    let mut deepest = 0;
    let mut idx = 0;
    for k in 0..s.n_rows {
        // Extend the block by row k.
        let mut all_header = true;
        while idx < s.cells.len() && s.cells[idx].anchor_row == k {
            let cell = &s.cells[idx];
            all_header &= cell.is_header;
            deepest = deepest.max(cell.bottom());
            idx += 1;
        }
        if !all_header {
            break;
        }
        if deepest <= k + 1 {
            best = k + 1;
        }
    }
    best
}

/// Walks the table in emission order, calling `row_start`, `cell`, `row_end`
/// and the section callbacks. Shared by markup emission and tokenization.
pub(crate) fn walk<V: Visitor>(s: &TableStructure, v: &mut V) -> Result<(), HtmlError> {
    s.check_tiling().map_err(|e| HtmlError::NonTiling(e.to_string()))?;
    let head = header_block_rows(s);
    let mut idx = 0;
    let mut emit_rows = |v: &mut V, range: std::ops::Range<usize>, in_head: bool| {
        for r in range {
            v.row_start();
            while idx < s.cells.len() && s.cells[idx].anchor_row == r {
                v.cell(&s.cells[idx], in_head);
                idx += 1;
            }
            v.row_end();
        }
    };
    if head > 0 {
        v.section_start("thead");
        emit_rows(v, 0..head, true);
        v.section_end("thead");
        if head < s.n_rows {
            v.section_start("tbody");
            emit_rows(v, head..s.n_rows, false);
            v.section_end("tbody");
        }
    } else {
        emit_rows(v, 0..s.n_rows, false);
    }
    Ok(())
}

pub(crate) trait Visitor {
    fn section_start(&mut self, tag: &str);
    fn section_end(&mut self, tag: &str);
    fn row_start(&mut self);
    fn row_end(&mut self);
    fn cell(&mut self, cell: &LogicalCell, in_head: bool);
}

struct MarkupWriter {
    out: String,
    mode: EmitMode,
}

impl Visitor for MarkupWriter {
    fn section_start(&mut self, tag: &str) {
        self.out.push('<');
        self.out.push_str(tag);
        self.out.push('>');
    }

    fn section_end(&mut self, tag: &str) {
        self.out.push_str("</");
        self.out.push_str(tag);
        self.out.push('>');
    }

    fn row_start(&mut self) {
        self.out.push_str("<tr>");
    }

    fn row_end(&mut self) {
        self.out.push_str("</tr>");
    }

    fn cell(&mut self, cell: &LogicalCell, in_head: bool) {
        // Header cells outside the head block keep their flag through <th>.
        let tag = if cell.is_header && !in_head { "th" } else { "td" };
        self.out.push('<');
        self.out.push_str(tag);
        if cell.row_span > 1 {
            self.out.push_str(&format!(" rowspan=\"{}\"", cell.row_span));
        }
        if cell.col_span > 1 {
            self.out.push_str(&format!(" colspan=\"{}\"", cell.col_span));
        }
        self.out.push('>');
        if self.mode == EmitMode::WithContent {
            if let Some(text) = &cell.content {
                self.out.push_str(&escape_text(text));
            }
        }
        self.out.push_str("</");
        self.out.push_str(tag);
        self.out.push('>');
    }
}

/// Serializes a structure as a `<table>` element. Header rows are wrapped in
/// `<thead>` (followed by `<tbody>`); otherwise rows sit directly under the
/// table.
pub fn structure_to_html(s: &TableStructure, mode: EmitMode) -> Result<String, HtmlError> {
    let mut w = MarkupWriter {
        out: String::from("<table>"),
        mode,
    };
    walk(s, &mut w)?;
    w.out.push_str("</table>");
    Ok(w.out)
}

/// Structural HTML straight from a matrix.
pub fn matrix_to_html(m: &CellMatrix) -> Result<String, HtmlError> {
    let s = crate::tablecore::matrix_to_cells(m).map_err(|e| HtmlError::NonTiling(e.to_string()))?;
    structure_to_html(&s, EmitMode::StructuralOnly)
}
