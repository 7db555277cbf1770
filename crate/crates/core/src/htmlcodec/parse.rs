use super::lexer::{decode_entities, lex, Lexeme};
use super::HtmlError;
use crate::tablecore::{LogicalCell, TableStructure};
use serde::{Deserialize, Serialize};
use std::ops::Range;

/// How a run of `<tr>` elements was grouped in the source markup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowGroupKind {
    Head,
    Body,
    /// Rows written directly under `<table>`.
    Bare,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowGroup {
    pub kind: RowGroupKind,
    /// Source `<tr>` indices, which are also grid row indices.
    pub rows: Range<usize>,
}

/// A parsed table together with its source text and row grouping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HtmlTableDoc {
    pub raw_text: String,
    pub structure: TableStructure,
    pub header_rows: usize,
    pub groups: Vec<RowGroup>,
    /// Number of `<tr>` elements in the source.
    pub tr_count: usize,
}

struct PendingCell {
    row_span: usize,
    col_span: usize,
    is_header: bool,
    text: String,
    close_tag: String,
}

fn span_attr(attrs: &[(String, String)], name: &str) -> Result<usize, HtmlError> {
    match attrs.iter().find(|(k, _)| k == name) {
        None => Ok(1),
        Some((_, v)) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n),
            _ => Err(HtmlError::MalformedMarkup(format!("invalid {name} value {v:?}"))),
        },
    }
}

fn malformed(msg: impl Into<String>) -> HtmlError {
    HtmlError::MalformedMarkup(msg.into())
}

const GROUP_TAGS: [&str; 3] = ["thead", "tbody", "tfoot"];

/// Parses markup holding exactly one table into its logical structure.
///
/// Cells are placed left to right, skipping positions already covered by
/// row spans from earlier rows. Tags other than the table subset are
/// stripped inside cells and ignored elsewhere.
pub fn parse_table_html(text: &str) -> Result<HtmlTableDoc, HtmlError> {
    let mut state = State::default();
    for lexeme in lex(text) {
        state.feed(lexeme)?;
    }
    match (state.seen_table, state.done) {
        (false, _) => return Err(malformed("no <table> element")),
        (true, false) => return Err(malformed("missing </table>")),
        _ => {}
    }
    let rows = state.rows;
    let groups = state.groups;
    let header_rows = groups
        .iter()
        .filter(|g| g.kind == RowGroupKind::Head)
        .map(|g| g.rows.len())
        .sum();
    let tr_count = rows.len();
    let structure = place(rows)?;
    Ok(HtmlTableDoc {
        raw_text: text.to_string(),
        structure,
        header_rows,
        groups,
        tr_count,
    })
}

#[derive(Default)]
struct State {
    seen_table: bool,
    in_table: bool,
    done: bool,
    group: Option<(RowGroupKind, String, usize)>,
    row: Option<Vec<PendingCell>>,
    cell: Option<PendingCell>,
    rows: Vec<Vec<PendingCell>>,
    groups: Vec<RowGroup>,
}

impl State {
    fn feed(&mut self, lexeme: Lexeme<'_>) -> Result<(), HtmlError> {
        if !self.in_table {
            return match lexeme {
                Lexeme::Open { name, .. } if name == "table" => {
                    if self.seen_table {
                        return Err(HtmlError::MultipleTables);
                    }
                    self.seen_table = true;
                    self.in_table = true;
                    Ok(())
                }
                Lexeme::Open { name, offset, .. } | Lexeme::Close { name, offset }
                    if is_table_part(&name) =>
                {
                    Err(malformed(format!("<{name}> at byte {offset} outside a table")))
                }
                _ => Ok(()),
            };
        }
        if let Some(cell) = self.cell.as_mut() {
            match lexeme {
                Lexeme::Text(t) => cell.text.push_str(&decode_entities(t)),
                Lexeme::Close { name, .. } if name == cell.close_tag => {
                    let cell = self.cell.take().expect("cell open");
                    self.row.as_mut().expect("row open").push(cell);
                }
                Lexeme::Open { name, .. } if name == "table" => return Err(HtmlError::MultipleTables),
                Lexeme::Open { name, offset, .. } | Lexeme::Close { name, offset }
                    if is_table_part(&name) =>
                {
                    return Err(malformed(format!(
                        "<{name}> at byte {offset} inside an unclosed <{}>",
                        cell.close_tag
                    )))
                }
                Lexeme::Open { name, .. } if name == "br" => cell.text.push(' '),
                _ => {}
            }
            return Ok(());
        }
        if self.row.is_some() {
            match lexeme {
                Lexeme::Open { name, attrs, .. } if name == "td" || name == "th" => {
                    let in_head = matches!(self.group, Some((RowGroupKind::Head, ..)));
                    self.cell = Some(PendingCell {
                        row_span: span_attr(&attrs, "rowspan")?,
                        col_span: span_attr(&attrs, "colspan")?,
                        is_header: name == "th" || in_head,
                        text: String::new(),
                        close_tag: name,
                    });
                }
                Lexeme::Close { name, .. } if name == "tr" => {
                    let row = self.row.take().expect("row open");
                    self.rows.push(row);
                }
                Lexeme::Open { name, .. } if name == "table" => return Err(HtmlError::MultipleTables),
                Lexeme::Open { name, offset, .. } | Lexeme::Close { name, offset }
                    if is_table_part(&name) =>
                {
                    return Err(malformed(format!("<{name}> at byte {offset} inside an unclosed <tr>")))
                }
                _ => {}
            }
            return Ok(());
        }
        match lexeme {
            Lexeme::Open { name, .. } if name == "table" => Err(HtmlError::MultipleTables),
            Lexeme::Open { name, offset, .. } if GROUP_TAGS.contains(&name.as_str()) => {
                if let Some((_, open, _)) = &self.group {
                    return Err(malformed(format!("<{name}> at byte {offset} inside an unclosed <{open}>")));
                }
                let kind = if name == "thead" {
                    RowGroupKind::Head
                } else {
                    RowGroupKind::Body
                };
                self.group = Some((kind, name, self.rows.len()));
                Ok(())
            }
            Lexeme::Close { name, offset } if GROUP_TAGS.contains(&name.as_str()) => {
                match self.group.take() {
                    Some((kind, open, start)) if open == name => {
                        self.groups.push(RowGroup {
                            kind,
                            rows: start..self.rows.len(),
                        });
                        Ok(())
                    }
                    _ => Err(malformed(format!("unmatched </{name}> at byte {offset}"))),
                }
            }
            Lexeme::Open { name, .. } if name == "tr" => {
                if self.group.is_none() {
                    let start = self.rows.len();
                    match self.groups.last_mut() {
                        Some(g) if g.kind == RowGroupKind::Bare && g.rows.end == start => g.rows.end += 1,
                        _ => self.groups.push(RowGroup {
                            kind: RowGroupKind::Bare,
                            rows: start..start + 1,
                        }),
                    }
                }
                self.row = Some(Vec::new());
                Ok(())
            }
            Lexeme::Close { name, offset } if name == "table" => {
                if let Some((_, open, _)) = &self.group {
                    return Err(malformed(format!("</table> at byte {offset} inside an unclosed <{open}>")));
                }
                self.in_table = false;
                self.done = true;
                Ok(())
            }
            Lexeme::Open { name, offset, .. } | Lexeme::Close { name, offset } if is_table_part(&name) => {
                Err(malformed(format!("misplaced <{name}> at byte {offset}")))
            }
            _ => Ok(()),
        }
    }
}

fn is_table_part(name: &str) -> bool {
    matches!(name, "table" | "thead" | "tbody" | "tfoot" | "tr" | "td" | "th")
}

fn place(rows: Vec<Vec<PendingCell>>) -> Result<TableStructure, HtmlError> {
    let mut occupied: Vec<Vec<bool>> = Vec::new();
    let mut cells = Vec::new();
    let ensure = |occ: &mut Vec<Vec<bool>>, r: usize, c: usize| {
        if occ.len() <= r {
            occ.resize_with(r + 1, Vec::new);
        }
        if occ[r].len() <= c {
            occ[r].resize(c + 1, false);
        }
    };
    for (r, row) in rows.into_iter().enumerate() {
        let mut col = 0;
        for pending in row {
            while occupied.get(r).and_then(|o| o.get(col)).copied().unwrap_or(false) {
                col += 1;
            }
            for rr in r..r + pending.row_span {
                for cc in col..col + pending.col_span {
                    ensure(&mut occupied, rr, cc);
                    if occupied[rr][cc] {
                        return Err(HtmlError::OverlappingSpans { row: rr, col: cc });
                    }
                    occupied[rr][cc] = true;
                }
            }
            let text = pending.text.trim();
            cells.push(LogicalCell {
                anchor_row: r,
                anchor_col: col,
                row_span: pending.row_span,
                col_span: pending.col_span,
                content: (!text.is_empty()).then(|| text.to_string()),
                is_header: pending.is_header,
            });
            col += pending.col_span;
        }
    }
    let n_rows = occupied.len();
    let n_cols = occupied.iter().map(Vec::len).max().unwrap_or(0);
    if n_rows == 0 || n_cols == 0 {
        return Err(malformed("table has no cells"));
    }
    for (r, row) in occupied.iter().enumerate() {
        if let Some(c) = (0..n_cols).find(|&c| !row.get(c).copied().unwrap_or(false)) {
            return Err(malformed(format!(
                "row {r} leaves position ({r},{c}) of the {n_rows}x{n_cols} grid uncovered"
            )));
        }
    }
    Ok(TableStructure { n_rows, n_cols, cells })
}
