use super::{validate_matrix, CellMatrix, TableError, Token};
use serde::{Deserialize, Serialize};

/// A table cell identified by its top-left anchor and its extent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LogicalCell {
    pub anchor_row: usize,
    pub anchor_col: usize,
    pub row_span: usize,
    pub col_span: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub content: Option<String>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub is_header: bool,
}

impl LogicalCell {
    pub fn new(anchor_row: usize, anchor_col: usize, row_span: usize, col_span: usize) -> Self {
        Self {
            anchor_row,
            anchor_col,
            row_span,
            col_span,
            content: None,
            is_header: false,
        }
    }

    pub fn with_content(mut self, content: impl Into<String>) -> Self {
        self.content = Some(content.into());
        self
    }

    pub fn bottom(&self) -> usize {
        self.anchor_row + self.row_span
    }

    pub fn right(&self) -> usize {
        self.anchor_col + self.col_span
    }

    pub fn covers(&self, row: usize, col: usize) -> bool {
        (self.anchor_row..self.bottom()).contains(&row) && (self.anchor_col..self.right()).contains(&col)
    }

    /// Empty after trimming whitespace, or absent.
    pub fn is_empty(&self) -> bool {
        self.content.as_deref().is_none_or(|c| c.trim().is_empty())
    }

    pub fn is_spanning(&self) -> bool {
        self.row_span > 1 || self.col_span > 1
    }

    /// Same geometry, ignoring content and header flag.
    pub fn same_shape(&self, other: &LogicalCell) -> bool {
        (self.anchor_row, self.anchor_col, self.row_span, self.col_span)
            == (other.anchor_row, other.anchor_col, other.row_span, other.col_span)
    }
}

/// Logical view of a table: cells tiling an `n_rows` x `n_cols` grid.
///
/// Fields are public so that arbitrary (possibly broken) structures can be
/// assembled; conversions check tiling via [`TableStructure::check_tiling`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableStructure {
    pub n_rows: usize,
    pub n_cols: usize,
    pub cells: Vec<LogicalCell>,
}

impl TableStructure {
    /// Sorts cells row-major by anchor and checks that they tile the grid.
    pub fn new(n_rows: usize, n_cols: usize, mut cells: Vec<LogicalCell>) -> Result<Self, TableError> {
        cells.sort_by_key(|c| (c.anchor_row, c.anchor_col));
        let s = Self { n_rows, n_cols, cells };
        s.check_tiling()?;
        Ok(s)
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n_rows, self.n_cols)
    }

    /// Verifies that every grid position is covered exactly once and that the
    /// cell list is strictly ordered by anchor. Returns the owner grid: for each
    /// position, the index of the covering cell.
    pub fn check_tiling(&self) -> Result<Vec<usize>, TableError> {
        if self.n_rows == 0 || self.n_cols == 0 {
            return Err(TableError::EmptyMatrix);
        }
        let mut owner = vec![usize::MAX; self.n_rows * self.n_cols];
        let mut prev: Option<(usize, usize)> = None;
        for (i, cell) in self.cells.iter().enumerate() {
            let key = (cell.anchor_row, cell.anchor_col);
            if prev.is_some_and(|p| p >= key) {
                return Err(TableError::NonTiling(format!(
                    "cell {i} anchored at {key:?} is out of row-major order"
                )));
            }
            prev = Some(key);
            if cell.row_span == 0 || cell.col_span == 0 {
                return Err(TableError::NonTiling(format!("cell {i} at {key:?} has a zero span")));
            }
            if cell.bottom() > self.n_rows || cell.right() > self.n_cols {
                return Err(TableError::NonTiling(format!(
                    "cell {i} at {key:?} spanning {}x{} leaves the {}x{} grid",
                    cell.row_span, cell.col_span, self.n_rows, self.n_cols
                )));
            }
            for r in cell.anchor_row..cell.bottom() {
                for c in cell.anchor_col..cell.right() {
                    let slot = &mut owner[r * self.n_cols + c];
                    if *slot != usize::MAX {
                        return Err(TableError::NonTiling(format!(
                            "cells {} and {i} overlap at ({r},{c})",
                            *slot
                        )));
                    }
                    *slot = i;
                }
            }
        }
        if let Some(pos) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(TableError::NonTiling(format!(
                "position ({},{}) is not covered by any cell",
                pos / self.n_cols,
                pos % self.n_cols
            )));
        }
        Ok(owner)
    }

    /// Returns the index of the cell covering `(row, col)`.
    pub fn cell_at(&self, row: usize, col: usize) -> Option<usize> {
        self.cells.iter().position(|c| c.covers(row, col))
    }

    /// Copy with every content removed and header flags cleared.
    pub fn shape_only(&self) -> TableStructure {
        TableStructure {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            cells: self
                .cells
                .iter()
                .map(|c| LogicalCell::new(c.anchor_row, c.anchor_col, c.row_span, c.col_span))
                .collect(),
        }
    }

    pub fn same_shape(&self, other: &TableStructure) -> bool {
        self.dims() == other.dims()
            && self.cells.len() == other.cells.len()
            && self.cells.iter().zip(&other.cells).all(|(a, b)| a.same_shape(b))
    }
}

/// One logical cell per anchor token, spans read from the runs of `L` to the
/// right and `U` below it.
pub fn matrix_to_cells(m: &CellMatrix) -> Result<TableStructure, TableError> {
    let report = validate_matrix(m);
    if !report.is_valid() {
        return Err(TableError::InvalidMatrix(report));
    }
    let mut cells = Vec::new();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if m.get(r, c) != Token::Anchor {
                continue;
            }
            let col_span = 1 + (c + 1..m.cols()).take_while(|&j| m.get(r, j) == Token::Left).count();
            let row_span = 1 + (r + 1..m.rows()).take_while(|&i| m.get(i, c) == Token::Up).count();
            cells.push(LogicalCell::new(r, c, row_span, col_span));
        }
    }
    Ok(TableStructure {
        n_rows: m.rows(),
        n_cols: m.cols(),
        cells,
    })
}

/// Inverse of [`matrix_to_cells`]: anchors become `C`, the rest of the anchor
/// row `L`, the rest of the anchor column `U`, and the interior `X`.
pub fn cells_to_matrix(s: &TableStructure) -> Result<CellMatrix, TableError> {
    s.check_tiling()?;
    let mut grid = vec![Token::Anchor; s.n_rows * s.n_cols];
    for cell in &s.cells {
        for r in cell.anchor_row..cell.bottom() {
            for c in cell.anchor_col..cell.right() {
                grid[r * s.n_cols + c] = match (r == cell.anchor_row, c == cell.anchor_col) {
                    (true, true) => Token::Anchor,
                    (true, false) => Token::Left,
                    (false, true) => Token::Up,
                    (false, false) => Token::Cross,
                };
            }
        }
    }
    CellMatrix::new(s.n_rows, s.n_cols, grid)
}
