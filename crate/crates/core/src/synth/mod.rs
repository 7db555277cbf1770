//! Table mix-expand synthesis: sample dimensions, partition the grid into
//! blocks, fill each block with a top-left crop of a corpus table, splice,
//! inject merges, then populate and judge content until a table passes.

pub mod client;
mod config;
mod content;
pub mod dataset;
mod pipeline;
mod sampling;

pub use config::{BcdstabDims, ContentMode, DimMode, SynthConfig, UniformDims};
pub use content::{
    deterministic_filler, structural_validator, AcceptAll, ClientError, ContentGenerator, DeterministicFiller,
    GenerationRequest, StructuralValidator, TableValidator, Verdict,
};
pub use pipeline::{
    build_matrix, derive_seed, record_id, synthesize_batch, synthesize_one, BlockSource, SynthRecord, ValidationOutcome,
};
pub use sampling::{
    block_grid, fill_block, partition_grid, sample_bcdstab_draw, sample_dims_bcdstab,
    sample_dims_uniform, BcdstabDraw,
};

use crate::corpus::CorpusError;
use crate::htmlcodec::HtmlError;
use crate::tablecore::TableError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("dimension sampling gave up after {attempts} draws")]
    RetryBudgetExhausted { attempts: usize },
    #[error("cannot split {rows}x{cols} into {n_blocks} grid blocks")]
    Unpartitionable { rows: usize, cols: usize, n_blocks: usize },
    #[error(transparent)]
    NoCompatibleSource(#[from] CorpusError),
    #[error("no {rows}x{cols} splice without implicit lines in {budget} draws")]
    ImplicitLinesExhausted { rows: usize, cols: usize, budget: usize },
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Html(#[from] HtmlError),
    #[error("record {record_id}: {source}")]
    Client { record_id: String, source: ClientError },
    #[error("internal: {0}")]
    Internal(String),
}
