use super::{TableError, Token};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Row-major grid of [`Token`]s describing table topology.
///
/// Construction only checks the shape. Well-formedness is a separate concern
/// handled by [`validate_matrix`](super::validate_matrix), so malformed grids
/// can be built, inspected and reported on.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct CellMatrix {
    rows: usize,
    cols: usize,
    grid: Vec<Token>,
}

impl CellMatrix {
    pub fn new(rows: usize, cols: usize, grid: Vec<Token>) -> Result<Self, TableError> {
        if rows == 0 || cols == 0 {
            return Err(TableError::EmptyMatrix);
        }
        if grid.len() != rows * cols {
            return Err(TableError::ShapeMismatch {
                rows,
                cols,
                actual: grid.len(),
            });
        }
        Ok(Self { rows, cols, grid })
    }

    /// A matrix of independent cells.
    pub fn filled(rows: usize, cols: usize) -> Result<Self, TableError> {
        Self::new(rows, cols, vec![Token::Anchor; rows * cols])
    }

    pub fn from_rows(rows: Vec<Vec<Token>>) -> Result<Self, TableError> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut grid = Vec::with_capacity(n_rows * n_cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n_cols {
                return Err(TableError::RaggedRows {
                    row: i,
                    found: row.len(),
                    expected: n_cols,
                });
            }
            grid.extend(row);
        }
        Self::new(n_rows, n_cols, grid)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn tokens(&self) -> &[Token] {
        &self.grid
    }

    pub fn get(&self, row: usize, col: usize) -> Token {
        assert!(row < self.rows && col < self.cols, "({row},{col}) out of bounds");
        self.grid[row * self.cols + col]
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, token: Token) {
        self.grid[row * self.cols + col] = token;
    }

    pub fn row(&self, row: usize) -> &[Token] {
        &self.grid[row * self.cols..(row + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[Token]> {
        self.grid.chunks(self.cols)
    }

    pub fn transpose(&self) -> CellMatrix {
        let mut grid = Vec::with_capacity(self.grid.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                grid.push(match self.get(r, c) {
                    Token::Left => Token::Up,
                    Token::Up => Token::Left,
                    t => t,
                });
            }
        }
        CellMatrix {
            rows: self.cols,
            cols: self.rows,
            grid,
        }
    }

    /// Text form: one line per row, one letter per token.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for CellMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.iter_rows().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            for t in row {
                write!(f, "{}", t.letter())?;
            }
        }
        Ok(())
    }
}

impl FromStr for CellMatrix {
    type Err = TableError;

    /// Accepts the text form with optional spaces between tokens. Blank lines
    /// (including a trailing newline) are ignored.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut rows = Vec::new();
        for (line_no, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut row = Vec::with_capacity(line.len());
            for (col, ch) in line.chars().enumerate() {
                if ch.is_whitespace() {
                    continue;
                }
                let token = Token::from_letter(ch).ok_or(TableError::UnknownToken {
                    found: ch,
                    line: line_no + 1,
                    column: col + 1,
                })?;
                row.push(token);
            }
            rows.push(row);
        }
        CellMatrix::from_rows(rows)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr(String);

impl TryFrom<MatrixRepr> for CellMatrix {
    type Error = TableError;

    fn try_from(value: MatrixRepr) -> Result<Self, Self::Error> {
        value.0.parse()
    }
}

impl From<CellMatrix> for MatrixRepr {
    fn from(m: CellMatrix) -> Self {
        MatrixRepr(m.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip_with_spaces() {
        let m: CellMatrix = "C L\nU X\n".parse().unwrap();
        assert_eq!(m.dims(), (2, 2));
        assert_eq!(m.to_text(), "CL\nUX");
        assert_eq!(m.to_text().parse::<CellMatrix>().unwrap(), m);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(
            "CC\nC".parse::<CellMatrix>(),
            Err(TableError::RaggedRows {
                row: 1,
                found: 1,
                expected: 2
            })
        );
        assert_eq!("".parse::<CellMatrix>(), Err(TableError::EmptyMatrix));
        assert!(matches!(
            "CQ".parse::<CellMatrix>(),
            Err(TableError::UnknownToken { found: 'Q', .. })
        ));
        assert!(matches!(
            CellMatrix::new(2, 2, vec![Token::Anchor; 3]),
            Err(TableError::ShapeMismatch { actual: 3, .. })
        ));
    }

    #[test]
    fn transpose_swaps_left_and_up() {
        let m: CellMatrix = "CL\nCC".parse().unwrap();
        assert_eq!(m.transpose().to_text(), "CC\nUC");
        assert_eq!(m.transpose().transpose(), m);
    }

    #[test]
    fn serde_as_text() {
        let m: CellMatrix = "CL\nUX".parse().unwrap();
        let json = serde_json::to_string(&m).unwrap();
        assert_eq!(json, r#""CL\nUX""#);
        assert_eq!(serde_json::from_str::<CellMatrix>(&json).unwrap(), m);
    }
}
