use crate::htmlcodec::{HtmlTableDoc, RowGroupKind};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeTag {
    Table,
    Thead,
    Tbody,
    Tr,
    Td,
}

impl NodeTag {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeTag::Table => "table",
            NodeTag::Thead => "thead",
            NodeTag::Tbody => "tbody",
            NodeTag::Tr => "tr",
            NodeTag::Td => "td",
        }
    }
}

/// Node of the ordered tree compared by TEDS. Only `td` nodes carry spans
/// other than 1 and content.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableTreeNode {
    pub tag: NodeTag,
    pub colspan: usize,
    pub rowspan: usize,
    pub content: Option<String>,
    pub children: Vec<TableTreeNode>,
}

impl TableTreeNode {
    pub fn element(tag: NodeTag, children: Vec<TableTreeNode>) -> Self {
        Self {
            tag,
            colspan: 1,
            rowspan: 1,
            content: None,
            children,
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(TableTreeNode::size).sum::<usize>()
    }
}

/// Builds the comparison tree, keeping the source `thead`/`tbody` grouping.
/// With `wrap_bare_rows`, rows written directly under `<table>` are placed
/// in a `tbody` so that differently grouped markups compare equal.
pub fn build_tree_with(doc: &HtmlTableDoc, wrap_bare_rows: bool) -> TableTreeNode {
    let s = &doc.structure;
    let mut by_row: Vec<Vec<TableTreeNode>> = vec![Vec::new(); doc.tr_count];
    for cell in &s.cells {
        if let Some(row) = by_row.get_mut(cell.anchor_row) {
            row.push(TableTreeNode {
                tag: NodeTag::Td,
                colspan: cell.col_span,
                rowspan: cell.row_span,
                content: Some(cell.content.clone().unwrap_or_default()),
                children: Vec::new(),
            });
        }
    }
    let mut rows = by_row.into_iter().map(|cells| TableTreeNode::element(NodeTag::Tr, cells));
    let mut children = Vec::new();
    for group in &doc.groups {
        let trs: Vec<_> = rows.by_ref().take(group.rows.len()).collect();
        match (group.kind, wrap_bare_rows) {
            (RowGroupKind::Head, _) => children.push(TableTreeNode::element(NodeTag::Thead, trs)),
            (RowGroupKind::Body, _) | (RowGroupKind::Bare, true) => {
                children.push(TableTreeNode::element(NodeTag::Tbody, trs))
            }
            (RowGroupKind::Bare, false) => children.extend(trs),
        }
    }
    TableTreeNode::element(NodeTag::Table, children)
}

pub fn build_tree(doc: &HtmlTableDoc) -> TableTreeNode {
    build_tree_with(doc, false)
}
