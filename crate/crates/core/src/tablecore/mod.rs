//! Atomic cell matrices and the logical cell view behind them.
//!
//! A [`CellMatrix`] stores one [`Token`] per grid position. Under the
//! neighbour rules checked by [`validate_matrix`], every merged region is a
//! rectangle anchored at its unique `C`, and any top-left window of a valid
//! matrix is again valid. That second property is what makes cropping and
//! splicing safe.

mod implicit;
mod matrix;
mod ops;
pub mod random;
mod structure;
mod token;
mod validate;

pub use implicit::{detect_implicit, remove_implicit, remove_implicit_from_structure, token_histogram, ImplicitReport};
pub use matrix::CellMatrix;
pub use ops::{crop_top_left, inject_merges, inject_merges_keeping_lines, splice, BlockLayout, Region};
pub use structure::{cells_to_matrix, matrix_to_cells, LogicalCell, TableStructure};
pub use token::Token;
pub use validate::{validate_matrix, Rule, ValidationReport, Violation};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("matrix dimensions must be positive")]
    EmptyMatrix,
    #[error("grid holds {actual} tokens but {rows}x{cols} needs {}", rows * cols)]
    ShapeMismatch { rows: usize, cols: usize, actual: usize },
    #[error("row {row} has {found} tokens, expected {expected}")]
    RaggedRows { row: usize, found: usize, expected: usize },
    #[error("unknown token {found:?} at line {line}, column {column}")]
    UnknownToken { found: char, line: usize, column: usize },
    #[error("matrix is not well formed: {0}")]
    InvalidMatrix(ValidationReport),
    #[error("cells do not tile the grid: {0}")]
    NonTiling(String),
    #[error("crop {rows}x{cols} is outside the {max_rows}x{max_cols} matrix")]
    OutOfBounds {
        rows: usize,
        cols: usize,
        max_rows: usize,
        max_cols: usize,
    },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("block {index} is not well formed: {report}")]
    InvalidBlock { index: usize, report: ValidationReport },
    #[error("invalid block layout: {0}")]
    InvalidLayout(String),
}
