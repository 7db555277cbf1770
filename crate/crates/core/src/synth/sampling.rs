//! Dimension sampling, grid partitioning and block filling.

use super::config::{BcdstabDims, UniformDims};
use super::SynthError;
use crate::corpus::Corpus;
use crate::tablecore::{crop_top_left, BlockLayout, CellMatrix};
use rand::seq::index;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

/// Rows and columns drawn independently and uniformly in `[min, max]`.
pub fn sample_dims_uniform(cfg: &UniformDims, rng: &mut impl Rng) -> (usize, usize) {
    (
        rng.random_range(cfg.min_dim..=cfg.max_dim),
        rng.random_range(cfg.min_dim..=cfg.max_dim),
    )
}

/// An accepted draw of the cell-count rejection sampler.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BcdstabDraw {
    pub cell_count: usize,
    pub rows: usize,
    pub cols: usize,
    /// Candidate (C, R) pairs drawn, including the accepted one.
    pub attempts: usize,
}

pub fn sample_bcdstab_draw(cfg: &BcdstabDims, rng: &mut impl Rng) -> Result<BcdstabDraw, SynthError> {
    let normal = Normal::new(cfg.cell_count_mean, cfg.cell_count_sd)
        .map_err(|e| SynthError::Config(format!("cell count distribution: {e}")))?;
    let [c_lo, c_hi] = cfg.cell_bounds;
    let [r_lo, r_hi] = cfg.row_bounds;
    let [k_lo, k_hi] = cfg.col_bounds;
    for attempt in 1..=cfg.max_retries {
        let c = normal.sample(rng).round();
        let rows = rng.random_range(r_lo..=r_hi);
        if c < c_lo as f64 || c > c_hi as f64 {
            continue;
        }
        let cell_count = c as usize;
        let cols = cell_count / rows;
        if (k_lo..=k_hi).contains(&cols) {
            return Ok(BcdstabDraw {
                cell_count,
                rows,
                cols,
                attempts: attempt,
            });
        }
    }
    Err(SynthError::RetryBudgetExhausted {
        attempts: cfg.max_retries,
    })
}

pub fn sample_dims_bcdstab(cfg: &BcdstabDims, rng: &mut impl Rng) -> Result<(usize, usize), SynthError> {
    sample_bcdstab_draw(cfg, rng).map(|d| (d.rows, d.cols))
}

/// The factor pair `a x b = n_blocks` with `a <= rows` and `b <= cols` that is
/// closest to square, preferring fewer row bands on ties.
pub fn block_grid(rows: usize, cols: usize, n_blocks: usize) -> Option<(usize, usize)> {
    (1..=n_blocks)
        .filter(|a| n_blocks % a == 0)
        .map(|a| (a, n_blocks / a))
        .filter(|&(a, b)| a <= rows && b <= cols)
        .min_by_key(|&(a, b)| (a.abs_diff(b), a))
}

fn sample_cuts(dim: usize, bands: usize, rng: &mut impl Rng) -> Vec<usize> {
    if bands <= 1 {
        return Vec::new();
    }
    let mut cuts: Vec<usize> = index::sample(rng, dim - 1, bands - 1).into_iter().map(|i| i + 1).collect();
    cuts.sort_unstable();
    cuts
}

/// Splits a `rows x cols` grid into `n_blocks` blocks with uniformly drawn
/// distinct interior cuts.
pub fn partition_grid(rows: usize, cols: usize, n_blocks: usize, rng: &mut impl Rng) -> Result<BlockLayout, SynthError> {
    let unpartitionable = || SynthError::Unpartitionable { rows, cols, n_blocks };
    if rows == 0 || cols == 0 || n_blocks == 0 {
        return Err(unpartitionable());
    }
    let (a, b) = block_grid(rows, cols, n_blocks).ok_or_else(unpartitionable)?;
    let row_cuts = sample_cuts(rows, a, rng);
    let col_cuts = sample_cuts(cols, b, rng);
    Ok(BlockLayout::new(rows, cols, row_cuts, col_cuts)?)
}

/// Top-left `h x w` crop of a corpus table drawn uniformly among those at
/// least that large.
pub fn fill_block(h: usize, w: usize, corpus: &Corpus, rng: &mut impl Rng) -> Result<(CellMatrix, String), SynthError> {
    let ids = corpus.compatible(h, w);
    if ids.is_empty() {
        return Err(SynthError::NoCompatibleSource(corpus.no_source(h, w)));
    }
    let rec = &corpus.records()[ids[rng.random_range(0..ids.len())]];
    Ok((crop_top_left(&rec.matrix, h, w)?, rec.id.clone()))
}
