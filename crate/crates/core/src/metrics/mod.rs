//! TEDS and S-TEDS: tree-edit-distance similarity between HTML tables.

mod batch;
pub mod strdist;
pub mod ted;
mod teds;
mod tree;

pub use batch::{batch_score, BatchError, BatchReport, BatchSummary, SampleScore, ScorePair};
pub use teds::{prepare_tree, rename_cost, teds, tree_distance, NodeLabel, TedsConfig, TedsError, TedsScore};
pub use tree::{build_tree, build_tree_with, NodeTag, TableTreeNode};
