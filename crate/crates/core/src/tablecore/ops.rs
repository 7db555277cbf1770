use super::{detect_implicit, validate_matrix, CellMatrix, TableError, Token};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Top-left `rows` x `cols` window of `m`. Any such window of a well-formed
/// matrix is itself well-formed.
pub fn crop_top_left(m: &CellMatrix, rows: usize, cols: usize) -> Result<CellMatrix, TableError> {
    if rows == 0 || cols == 0 || rows > m.rows() || cols > m.cols() {
        return Err(TableError::OutOfBounds {
            rows,
            cols,
            max_rows: m.rows(),
            max_cols: m.cols(),
        });
    }
    let grid = m.iter_rows().take(rows).flat_map(|row| row[..cols].iter().copied()).collect();
    CellMatrix::new(rows, cols, grid)
}

/// A rectangular region of a [`BlockLayout`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub row: usize,
    pub col: usize,
    pub height: usize,
    pub width: usize,
}

/// Grid partition of a table into blocks by interior row and column cuts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockLayout {
    n_rows: usize,
    n_cols: usize,
    row_cuts: Vec<usize>,
    col_cuts: Vec<usize>,
}

impl BlockLayout {
    /// Cuts must be strictly increasing interior indices (`0 < cut < dim`).
    pub fn new(
        n_rows: usize,
        n_cols: usize,
        row_cuts: Vec<usize>,
        col_cuts: Vec<usize>,
    ) -> Result<Self, TableError> {
        if n_rows == 0 || n_cols == 0 {
            return Err(TableError::EmptyMatrix);
        }
        for (cuts, dim, axis) in [(&row_cuts, n_rows, "row"), (&col_cuts, n_cols, "column")] {
            let interior = cuts.iter().all(|&c| c > 0 && c < dim);
            let increasing = cuts.windows(2).all(|w| w[0] < w[1]);
            if !interior || !increasing {
                return Err(TableError::InvalidLayout(format!(
                    "{axis} cuts {cuts:?} are not strictly increasing inside 1..{dim}"
                )));
            }
        }
        Ok(Self {
            n_rows,
            n_cols,
            row_cuts,
            col_cuts,
        })
    }

    /// The trivial layout: one block covering the whole table.
    pub fn whole(n_rows: usize, n_cols: usize) -> Result<Self, TableError> {
        Self::new(n_rows, n_cols, Vec::new(), Vec::new())
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n_rows, self.n_cols)
    }

    pub fn row_cuts(&self) -> &[usize] {
        &self.row_cuts
    }

    pub fn col_cuts(&self) -> &[usize] {
        &self.col_cuts
    }

    /// Number of blocks along each axis.
    pub fn grid_shape(&self) -> (usize, usize) {
        (self.row_cuts.len() + 1, self.col_cuts.len() + 1)
    }

    /// Regions in row-major block order.
    pub fn regions(&self) -> Vec<Region> {
        let bounds = |cuts: &[usize], dim: usize| -> Vec<(usize, usize)> {
            let mut edges = Vec::with_capacity(cuts.len() + 2);
            edges.push(0);
            edges.extend_from_slice(cuts);
            edges.push(dim);
            edges.windows(2).map(|w| (w[0], w[1] - w[0])).collect()
        };
        let rows = bounds(&self.row_cuts, self.n_rows);
        let cols = bounds(&self.col_cuts, self.n_cols);
        let mut out = Vec::with_capacity(rows.len() * cols.len());
        for &(row, height) in &rows {
            for &(col, width) in &cols {
                out.push(Region {
                    row,
                    col,
                    height,
                    width,
                });
            }
        }
        out
    }
}

/// Copies each block into its region of the layout.
///
/// Because a well-formed block never has `U`/`X` in its first row nor
/// `L`/`X` in its first column, no merge crosses a block boundary and the
/// result is well-formed.
pub fn splice(layout: &BlockLayout, blocks: &[CellMatrix]) -> Result<CellMatrix, TableError> {
    let regions = layout.regions();
    if regions.len() != blocks.len() {
        return Err(TableError::DimensionMismatch(format!(
            "layout has {} regions but {} blocks were given",
            regions.len(),
            blocks.len()
        )));
    }
    let (n_rows, n_cols) = layout.dims();
    let mut out = CellMatrix::filled(n_rows, n_cols)?;
    for (i, (region, block)) in regions.iter().zip(blocks).enumerate() {
        if block.dims() != (region.height, region.width) {
            return Err(TableError::DimensionMismatch(format!(
                "block {i} is {}x{} but its region is {}x{}",
                block.rows(),
                block.cols(),
                region.height,
                region.width
            )));
        }
        let report = validate_matrix(block);
        if !report.is_valid() {
            return Err(TableError::InvalidBlock { index: i, report });
        }
        for r in 0..region.height {
            for c in 0..region.width {
                out.set(region.row + r, region.col + c, block.get(r, c));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Direction {
    Right,
    Down,
}

fn is_unit_anchor(m: &CellMatrix, r: usize, c: usize) -> bool {
    m.get(r, c) == Token::Anchor
        && (c + 1 >= m.cols() || m.get(r, c + 1) != Token::Left)
        && (r + 1 >= m.rows() || m.get(r + 1, c) != Token::Up)
}

fn legal_merges(m: &CellMatrix) -> Vec<(usize, usize, Direction)> {
    let mut moves = Vec::new();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if !is_unit_anchor(m, r, c) {
                continue;
            }
            if c + 1 < m.cols() && is_unit_anchor(m, r, c + 1) {
                moves.push((r, c, Direction::Right));
            }
            if r + 1 < m.rows() && is_unit_anchor(m, r + 1, c) {
                moves.push((r, c, Direction::Down));
            }
        }
    }
    moves
}

fn apply_merge(m: &mut CellMatrix, (r, c, dir): (usize, usize, Direction)) {
    match dir {
        Direction::Right => m.set(r, c + 1, Token::Left),
        Direction::Down => m.set(r + 1, c, Token::Up),
    }
}

fn inject(
    m: &CellMatrix,
    k: usize,
    rng: &mut impl Rng,
    keep_lines: bool,
) -> Result<CellMatrix, TableError> {
    let report = validate_matrix(m);
    if !report.is_valid() {
        return Err(TableError::InvalidMatrix(report));
    }
    let mut out = m.clone();
    for _ in 0..k {
        let mut moves = legal_merges(&out);
        if keep_lines {
            moves.retain(|&mv| {
                let mut trial = out.clone();
                apply_merge(&mut trial, mv);
                detect_implicit(&trial).map(|r| r.is_clean()).unwrap_or(false)
            });
        }
        if moves.is_empty() {
            break;
        }
        let mv = moves[rng.random_range(0..moves.len())];
        apply_merge(&mut out, mv);
    }
    Ok(out)
}

/// Performs up to `k` random merges of two adjacent 1x1 cells, each chosen
/// uniformly among all currently legal horizontal and vertical pair merges.
/// Stops early when no legal merge remains.
pub fn inject_merges(m: &CellMatrix, k: usize, rng: &mut impl Rng) -> Result<CellMatrix, TableError> {
    inject(m, k, rng, false)
}

/// Like [`inject_merges`], but skips merges that would leave a row or column
/// without any anchoring token.
pub fn inject_merges_keeping_lines(
    m: &CellMatrix,
    k: usize,
    rng: &mut impl Rng,
) -> Result<CellMatrix, TableError> {
    inject(m, k, rng, true)
}
