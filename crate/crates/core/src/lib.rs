//! Table structure toolkit: atomic cell matrices, HTML table codec, TEDS
//! scoring, instruction targets, table mix-expand synthesis, rendering
//! handoff and corpus auditing.

pub mod corpus;
pub mod htmlcodec;
pub mod instructions;
pub mod metrics;
pub mod render;
pub mod synth;
pub mod tablecore;

pub use corpus::{audit_implicit, load_annotations, AuditReport, Corpus, CorpusFormat, CorpusRecord, LoadOptions};
pub use htmlcodec::{parse_table_html, structure_to_html, EmitMode, HtmlError, HtmlTableDoc};
pub use instructions::{
    prediction_instruction, render_instruction, sample_triplet, select_targets, InstructionSpec, TargetSet,
    TrainingTriplet,
};
pub use metrics::{batch_score, teds, TedsConfig, TedsScore};
pub use render::{check_constraints, emit_document, sample_style, StyleAugmentation};
pub use synth::{synthesize_batch, synthesize_one, SynthConfig, SynthError, SynthRecord};
pub use tablecore::{
    cells_to_matrix, detect_implicit, matrix_to_cells, remove_implicit, validate_matrix, CellMatrix, LogicalCell,
    TableError, TableStructure, Token,
};
