use super::emit::{walk, Visitor};
use super::HtmlError;
use crate::tablecore::{CellMatrix, LogicalCell, TableStructure};
use serde::{Deserialize, Serialize};

/// PubTabNet-style structural token list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StructuralTokenSequence {
    pub tokens: Vec<String>,
}

impl StructuralTokenSequence {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Concatenated markup (without the surrounding `<table>` element).
    pub fn to_markup(&self) -> String {
        self.tokens.concat()
    }
}

struct TokenWriter(Vec<String>);

impl Visitor for TokenWriter {
    fn section_start(&mut self, tag: &str) {
        self.0.push(format!("<{tag}>"));
    }

    fn section_end(&mut self, tag: &str) {
        self.0.push(format!("</{tag}>"));
    }

    fn row_start(&mut self) {
        self.0.push("<tr>".into());
    }

    fn row_end(&mut self) {
        self.0.push("</tr>".into());
    }

    fn cell(&mut self, cell: &LogicalCell, _in_head: bool) {
        if cell.is_spanning() {
            self.0.push("<td".into());
            if cell.row_span > 1 {
                self.0.push(format!(" rowspan=\"{}\"", cell.row_span));
            }
            if cell.col_span > 1 {
                self.0.push(format!(" colspan=\"{}\"", cell.col_span));
            }
            self.0.push(">".into());
        } else {
            self.0.push("<td>".into());
        }
        self.0.push("</td>".into());
    }
}

pub fn tokenize_structure(s: &TableStructure) -> Result<StructuralTokenSequence, HtmlError> {
    let mut w = TokenWriter(Vec::new());
    walk(s, &mut w)?;
    Ok(StructuralTokenSequence { tokens: w.0 })
}

/// One token per grid position.
pub fn count_matrix_tokens(m: &CellMatrix) -> usize {
    m.rows() * m.cols()
}

/// Token and character economy of the matrix form against structural HTML.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TokenEconomy {
    pub matrix_tokens: usize,
    pub html_tokens: usize,
    pub matrix_chars: usize,
    pub html_chars: usize,
}

impl TokenEconomy {
    pub fn token_ratio(&self) -> f64 {
        self.matrix_tokens as f64 / self.html_tokens as f64
    }

    pub fn char_ratio(&self) -> f64 {
        self.matrix_chars as f64 / self.html_chars as f64
    }
}

/// Compares the matrix text (rows joined by newlines) with the structural
/// token sequence and the structural-only markup.
pub fn token_economy(m: &CellMatrix) -> Result<TokenEconomy, HtmlError> {
    let s = crate::tablecore::matrix_to_cells(m).map_err(|e| HtmlError::NonTiling(e.to_string()))?;
    let tokens = tokenize_structure(&s)?;
    let html = super::structure_to_html(&s, super::EmitMode::StructuralOnly)?;
    Ok(TokenEconomy {
        matrix_tokens: count_matrix_tokens(m),
        html_tokens: tokens.len(),
        matrix_chars: m.to_text().chars().count(),
        html_chars: html.chars().count(),
    })
}
