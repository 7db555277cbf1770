use super::strdist::PreparedText;
use super::ted::{tree_edit_distance_in, OrderedTree, TedScratch};
use super::tree::{build_tree_with, NodeTag, TableTreeNode};
use crate::htmlcodec::{parse_table_html, HtmlError};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TedsConfig {
    /// Ignore cell text (S-TEDS).
    pub structure_only: bool,
    /// Wrap rows that sit directly under `<table>` in a `tbody` before
    /// comparing.
    #[serde(default)]
    pub wrap_bare_rows: bool,
}

impl TedsConfig {
    pub fn full() -> Self {
        Self::default()
    }

    pub fn structure() -> Self {
        Self {
            structure_only: true,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TedsScore {
    pub value: f64,
    pub distance: f64,
    pub size_pred: usize,
    pub size_gt: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TedsError {
    #[error("prediction: {0}")]
    Prediction(HtmlError),
    #[error("ground truth: {0}")]
    GroundTruth(HtmlError),
}

/// Label used by the edit distance: tag, spans, and prepared content.
#[derive(Debug, Clone)]
pub struct NodeLabel {
    tag: NodeTag,
    colspan: usize,
    rowspan: usize,
    content: Option<PreparedText>,
}

/// Flattens a table tree for repeated comparisons.
pub fn prepare_tree(root: &TableTreeNode) -> OrderedTree<NodeLabel> {
    OrderedTree::build(
        root,
        |n| &n.children,
        |n| NodeLabel {
            tag: n.tag,
            colspan: n.colspan,
            rowspan: n.rowspan,
            content: (n.tag == NodeTag::Td).then(|| PreparedText::new(n.content.as_deref().unwrap_or(""))),
        },
    )
}

/// Rename cost: 1 for different tags or `td` nodes with different spans;
/// otherwise 0, except that `td` contents cost their normalized character
/// edit distance unless `structure_only` is set.
pub fn rename_cost(a: &NodeLabel, b: &NodeLabel, structure_only: bool) -> f64 {
    if a.tag != b.tag {
        return 1.0;
    }
    if a.tag != NodeTag::Td {
        return 0.0;
    }
    if a.colspan != b.colspan || a.rowspan != b.rowspan {
        return 1.0;
    }
    if structure_only {
        return 0.0;
    }
    match (&a.content, &b.content) {
        (Some(x), Some(y)) => x.normalized_distance(y),
        _ => 0.0,
    }
}

pub fn tree_distance(a: &TableTreeNode, b: &TableTreeNode, cfg: &TedsConfig) -> f64 {
    prepared_distance(&mut TedScratch::default(), &prepare_tree(a), &prepare_tree(b), cfg.structure_only)
}

pub(crate) fn prepared_distance(
    scratch: &mut TedScratch<f64>,
    a: &OrderedTree<NodeLabel>,
    b: &OrderedTree<NodeLabel>,
    structure_only: bool,
) -> f64 {
    tree_edit_distance_in(scratch, a, b, |x, y| rename_cost(x, y, structure_only))
}

/// Structure-only and full distances from a single pass.
pub(crate) fn prepared_distances(
    scratch: &mut TedScratch<[f64; 2]>,
    a: &OrderedTree<NodeLabel>,
    b: &OrderedTree<NodeLabel>,
) -> [f64; 2] {
    tree_edit_distance_in(scratch, a, b, |x, y| [rename_cost(x, y, true), rename_cost(x, y, false)])
}

pub(crate) fn score_from(distance: f64, size_pred: usize, size_gt: usize) -> TedsScore {
    let longest = size_pred.max(size_gt).max(1) as f64;
    TedsScore {
        value: (1.0 - distance / longest).clamp(0.0, 1.0),
        distance,
        size_pred,
        size_gt,
    }
}

/// Tree-edit-distance similarity of two table markups, normalized by the
/// larger tree.
pub fn teds(pred: &str, gt: &str, cfg: &TedsConfig) -> Result<TedsScore, TedsError> {
    let gt_doc = parse_table_html(gt).map_err(TedsError::GroundTruth)?;
    let pred_doc = parse_table_html(pred).map_err(TedsError::Prediction)?;
    let a = prepare_tree(&build_tree_with(&pred_doc, cfg.wrap_bare_rows));
    let b = prepare_tree(&build_tree_with(&gt_doc, cfg.wrap_bare_rows));
    let d = prepared_distance(&mut TedScratch::default(), &a, &b, cfg.structure_only);
    Ok(score_from(d, a.len(), b.len()))
}
