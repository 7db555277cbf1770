//! Implicit rows and columns: grid lines in which no cell originates.
//!
//! A renderer collapses such lines, so the image shows fewer rows than the
//! annotation claims. Row `i` is implicit when it holds only `U`/`X` tokens;
//! column `j` when it holds only `L`/`X` tokens.

use super::{cells_to_matrix, matrix_to_cells, validate_matrix, CellMatrix, LogicalCell, TableError, TableStructure, Token};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImplicitReport {
    pub implicit_rows: Vec<usize>,
    pub implicit_cols: Vec<usize>,
}

impl ImplicitReport {
    pub fn is_clean(&self) -> bool {
        self.implicit_rows.is_empty() && self.implicit_cols.is_empty()
    }
}

pub fn detect_implicit(m: &CellMatrix) -> Result<ImplicitReport, TableError> {
    let report = validate_matrix(m);
    if !report.is_valid() {
        return Err(TableError::InvalidMatrix(report));
    }
    Ok(scan(m))
}

fn scan(m: &CellMatrix) -> ImplicitReport {
    let implicit_rows = (0..m.rows())
        .filter(|&r| m.row(r).iter().all(|t| t.merges_up()))
        .collect();
    let implicit_cols = (0..m.cols())
        .filter(|&c| (0..m.rows()).all(|r| m.get(r, c).merges_left()))
        .collect();
    ImplicitReport {
        implicit_rows,
        implicit_cols,
    }
}

/// Deletes every implicit row and column, shrinking the spans that crossed
/// them. Anchors never sit on an implicit line, so every cell survives.
pub fn remove_implicit(m: &CellMatrix) -> Result<CellMatrix, TableError> {
    let report = detect_implicit(m)?;
    if report.is_clean() {
        return Ok(m.clone());
    }
    let s = matrix_to_cells(m)?;
    cells_to_matrix(&remove_implicit_lines(&s, &report))
}

/// Structure-level removal, keeping cell contents and header flags.
pub fn remove_implicit_from_structure(s: &TableStructure) -> Result<TableStructure, TableError> {
    let report = detect_implicit(&cells_to_matrix(s)?)?;
    if report.is_clean() {
        return Ok(s.clone());
    }
    Ok(remove_implicit_lines(s, &report))
}

fn remove_implicit_lines(s: &TableStructure, report: &ImplicitReport) -> TableStructure {
    // new_index[i] = number of kept lines before i
    let remap = |dim: usize, dropped: &[usize]| -> Vec<usize> {
        let mut kept_before = Vec::with_capacity(dim + 1);
        let mut k = 0;
        for i in 0..dim {
            kept_before.push(k);
            if dropped.binary_search(&i).is_err() {
                k += 1;
            }
        }
        kept_before.push(k);
        kept_before
    };
    let rows = remap(s.n_rows, &report.implicit_rows);
    let cols = remap(s.n_cols, &report.implicit_cols);
    let cells = s
        .cells
        .iter()
        .map(|c| LogicalCell {
            anchor_row: rows[c.anchor_row],
            anchor_col: cols[c.anchor_col],
            row_span: rows[c.bottom()] - rows[c.anchor_row],
            col_span: cols[c.right()] - cols[c.anchor_col],
            content: c.content.clone(),
            is_header: c.is_header,
        })
        .collect();
    TableStructure {
        n_rows: rows[s.n_rows],
        n_cols: cols[s.n_cols],
        cells,
    }
}

/// Counts tokens of each kind, handy for statistics.
pub fn token_histogram(m: &CellMatrix) -> [usize; 4] {
    let mut out = [0; 4];
    for t in m.tokens() {
        let i = match t {
            Token::Anchor => 0,
            Token::Left => 1,
            Token::Up => 2,
            Token::Cross => 3,
        };
        out[i] += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(text: &str) -> CellMatrix {
        text.parse().unwrap()
    }

    #[test]
    fn detects_spanned_row() {
        let r = detect_implicit(&m("CC\nCL\nUX")).unwrap();
        assert_eq!(r.implicit_rows, vec![2]);
        assert!(r.implicit_cols.is_empty());
    }

    #[test]
    fn transpose_moves_defect_to_columns() {
        let r = detect_implicit(&m("CC\nCL\nUX").transpose()).unwrap();
        assert!(r.implicit_rows.is_empty());
        assert_eq!(r.implicit_cols, vec![2]);
    }

    #[test]
    fn plain_grid_is_clean() {
        assert!(detect_implicit(&CellMatrix::filled(4, 3).unwrap()).unwrap().is_clean());
    }

    #[test]
    fn removal_shrinks_spans() {
        let fixed = remove_implicit(&m("CC\nCL\nUX")).unwrap();
        assert_eq!(fixed.to_text(), "CC\nCL");
        assert_eq!(remove_implicit(&fixed).unwrap(), fixed);
        let clean = m("CL\nCC");
        assert_eq!(remove_implicit(&clean).unwrap(), clean);
    }

    #[test]
    fn removal_of_rows_and_columns_together() {
        // One 3x3 cell: rows 1,2 and columns 1,2 are implicit.
        let fixed = remove_implicit(&m("CLL\nUXX\nUXX")).unwrap();
        assert_eq!(fixed.to_text(), "C");
    }

    #[test]
    fn structure_removal_keeps_content() {
        let s = TableStructure::new(
            2,
            2,
            vec![
                LogicalCell::new(0, 0, 2, 1).with_content("a"),
                LogicalCell::new(0, 1, 2, 1).with_content("b"),
            ],
        )
        .unwrap();
        let fixed = remove_implicit_from_structure(&s).unwrap();
        assert_eq!(fixed.dims(), (1, 2));
        assert_eq!(fixed.cells[1].content.as_deref(), Some("b"));
        assert_eq!(fixed.cells[1].row_span, 1);
    }

    #[test]
    fn histogram_counts() {
        assert_eq!(token_histogram(&m("CL\nUX")), [1, 1, 1, 1]);
    }
}
