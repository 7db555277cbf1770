//! HTML table markup: parsing into [`TableStructure`](crate::TableStructure),
//! emission with or without content, and structural tokenization.

mod emit;
mod lexer;
mod parse;
mod tokens;

pub use emit::{header_block_rows, matrix_to_html, structure_to_html, EmitMode};
pub use parse::{parse_table_html, HtmlTableDoc, RowGroup, RowGroupKind};
pub use tokens::{count_matrix_tokens, token_economy, tokenize_structure, StructuralTokenSequence, TokenEconomy};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HtmlError {
    #[error("malformed markup: {0}")]
    MalformedMarkup(String),
    #[error("cell spans overlap at ({row},{col})")]
    OverlappingSpans { row: usize, col: usize },
    #[error("markup contains more than one table")]
    MultipleTables,
    #[error("structure does not tile its grid: {0}")]
    NonTiling(String),
}
