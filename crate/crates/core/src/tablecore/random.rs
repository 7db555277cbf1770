//! Random well-formed tables, used by property tests, fixtures and benches.

use super::{cells_to_matrix, CellMatrix, LogicalCell, TableStructure};
use rand::Rng;

/// Knobs for [`random_structure`].
#[derive(Debug, Clone, Copy)]
pub struct SpanProfile {
    /// Probability that a freshly placed cell tries to span.
    pub span_probability: f64,
    /// Largest row or column span drawn.
    pub max_span: usize,
}

impl Default for SpanProfile {
    fn default() -> Self {
        Self {
            span_probability: 0.25,
            max_span: 4,
        }
    }
}

/// Tiles an `n_rows` x `n_cols` grid with random rectangles, scanning
/// positions row-major and placing a cell at each uncovered one.
pub fn random_structure(
    n_rows: usize,
    n_cols: usize,
    profile: SpanProfile,
    rng: &mut impl Rng,
) -> TableStructure {
    assert!(n_rows > 0 && n_cols > 0, "dimensions must be positive");
    let mut covered = vec![false; n_rows * n_cols];
    let mut cells = Vec::new();
    for r in 0..n_rows {
        for c in 0..n_cols {
            if covered[r * n_cols + c] {
                continue;
            }
            let (mut h, mut w) = (1, 1);
            if profile.max_span > 1 && rng.random_bool(profile.span_probability) {
                let max_w = (c..n_cols)
                    .take_while(|&j| !covered[r * n_cols + j])
                    .count()
                    .min(profile.max_span);
                w = rng.random_range(1..=max_w);
                let max_h = (r..n_rows)
                    .take_while(|&i| (c..c + w).all(|j| !covered[i * n_cols + j]))
                    .count()
                    .min(profile.max_span);
                h = rng.random_range(1..=max_h);
            }
            for i in r..r + h {
                for j in c..c + w {
                    covered[i * n_cols + j] = true;
                }
            }
            cells.push(LogicalCell::new(r, c, h, w));
        }
    }
    TableStructure {
        n_rows,
        n_cols,
        cells,
    }
}

/// A random well-formed matrix with dimensions drawn from `1..=max_rows` and
/// `1..=max_cols`.
pub fn random_matrix(max_rows: usize, max_cols: usize, profile: SpanProfile, rng: &mut impl Rng) -> CellMatrix {
    let rows = rng.random_range(1..=max_rows);
    let cols = rng.random_range(1..=max_cols);
    cells_to_matrix(&random_structure(rows, cols, profile, rng)).expect("generator always tiles")
}

/// Attaches random short contents to every cell; roughly `empty_fraction` of
/// the cells stay empty.
pub fn random_contents(s: &TableStructure, empty_fraction: f64, rng: &mut impl Rng) -> TableStructure {
    const ALPHABET: &[u8] = b"abcdefghijklmnopqrstuvwxyz0123456789 .,%$";
    let mut out = s.clone();
    for cell in &mut out.cells {
        if rng.random_bool(empty_fraction) {
            cell.content = None;
            continue;
        }
        let len = rng.random_range(1..=12);
        let text: String = (0..len)
            .map(|_| ALPHABET[rng.random_range(0..ALPHABET.len())] as char)
            .collect();
        let text = text.trim().to_string();
        cell.content = if text.is_empty() { None } else { Some(text) };
    }
    out
}
