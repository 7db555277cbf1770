//! Instruction templates for table understanding and the targets each one
//! selects from a table.
//!
//! Four groups: whole-structure recognition, cells at given positions,
//! empty or non-empty cells, and merged cells. Parameters are 1-based as
//! they appear in instruction text.

use crate::tablecore::{cells_to_matrix, CellMatrix, LogicalCell, TableError, TableStructure};
use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::fmt::Write;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstructionError {
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("group {group} has no template {variant}")]
    UnknownTemplate { group: u8, variant: u8 },
    #[error("no instruction produced a target within {0} attempts")]
    NoValidInstruction(usize),
    #[error(transparent)]
    Table(#[from] TableError),
}

/// One of the thirteen templates with its bound parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "template", rename_all = "snake_case")]
pub enum InstructionSpec {
    AllCells,
    AllCellsWithRows,
    AllCellsWithColumns,
    AllCellsWithRowsAndColumns,
    /// Cells intersecting any of the given rows.
    InRows { rows: Vec<usize> },
    /// Cells intersecting any of the given columns.
    InColumns { cols: Vec<usize> },
    /// Cells intersecting both row `row` and column `col`.
    AtPosition { row: usize, col: usize },
    /// Cells touching (edge or corner) the cell covering `(row, col)`.
    AroundPosition { row: usize, col: usize },
    EmptyCells,
    NonEmptyCells,
    MergedRows,
    MergedColumns,
    MergedRowsAndColumns,
}

/// Templates in group/variant order.
pub const TEMPLATE_COUNT: usize = 13;

impl InstructionSpec {
    pub fn group(&self) -> u8 {
        self.group_variant().0
    }

    pub fn variant(&self) -> u8 {
        self.group_variant().1
    }

    /// 1-based group and variant.
    pub fn group_variant(&self) -> (u8, u8) {
        use InstructionSpec::*;
        match self {
            AllCells => (1, 1),
            AllCellsWithRows => (1, 2),
            AllCellsWithColumns => (1, 3),
            AllCellsWithRowsAndColumns => (1, 4),
            InRows { .. } => (2, 1),
            InColumns { .. } => (2, 2),
            AtPosition { .. } => (2, 3),
            AroundPosition { .. } => (2, 4),
            EmptyCells => (3, 1),
            NonEmptyCells => (3, 2),
            MergedRows => (4, 1),
            MergedColumns => (4, 2),
            MergedRowsAndColumns => (4, 3),
        }
    }

    /// Index 0..13 in group/variant order.
    pub fn template_index(&self) -> usize {
        let (g, v) = self.group_variant();
        [0, 0, 4, 8, 10][g as usize] + v as usize - 1
    }

    /// Builds a parameter-free template, or checks that the given
    /// parameters fit it.
    pub fn from_parts(group: u8, variant: u8, params: TemplateParams) -> Result<Self, InstructionError> {
        use InstructionSpec::*;
        let missing = |what: &str| InstructionError::ParamOutOfRange(format!("template {group}.{variant} needs {what}"));
        Ok(match (group, variant) {
            (1, 1) => AllCells,
            (1, 2) => AllCellsWithRows,
            (1, 3) => AllCellsWithColumns,
            (1, 4) => AllCellsWithRowsAndColumns,
            (2, 1) => InRows {
                rows: params.rows.ok_or_else(|| missing("R"))?,
            },
            (2, 2) => InColumns {
                cols: params.cols.ok_or_else(|| missing("C"))?,
            },
            (2, 3) => AtPosition {
                row: params.x.ok_or_else(|| missing("x"))?,
                col: params.y.ok_or_else(|| missing("y"))?,
            },
            (2, 4) => AroundPosition {
                row: params.x.ok_or_else(|| missing("x"))?,
                col: params.y.ok_or_else(|| missing("y"))?,
            },
            (3, 1) => EmptyCells,
            (3, 2) => NonEmptyCells,
            (4, 1) => MergedRows,
            (4, 2) => MergedColumns,
            (4, 3) => MergedRowsAndColumns,
            _ => return Err(InstructionError::UnknownTemplate { group, variant }),
        })
    }

    fn check(&self, s: &TableStructure) -> Result<(), InstructionError> {
        let in_range = |v: usize, n: usize, what: &str| {
            if v == 0 || v > n {
                Err(InstructionError::ParamOutOfRange(format!("{what}={v} outside 1..={n}")))
            } else {
                Ok(())
            }
        };
        match self {
            InstructionSpec::InRows { rows } => {
                if rows.is_empty() {
                    return Err(InstructionError::ParamOutOfRange("R is empty".into()));
                }
                rows.iter().try_for_each(|&r| in_range(r, s.n_rows, "row"))
            }
            InstructionSpec::InColumns { cols } => {
                if cols.is_empty() {
                    return Err(InstructionError::ParamOutOfRange("C is empty".into()));
                }
                cols.iter().try_for_each(|&c| in_range(c, s.n_cols, "column"))
            }
            InstructionSpec::AtPosition { row, col } | InstructionSpec::AroundPosition { row, col } => {
                in_range(*row, s.n_rows, "x")?;
                in_range(*col, s.n_cols, "y")
            }
            _ => Ok(()),
        }
    }
}

/// Loose parameter bag used by [`InstructionSpec::from_parts`].
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateParams {
    pub rows: Option<Vec<usize>>,
    pub cols: Option<Vec<usize>>,
    pub x: Option<usize>,
    pub y: Option<usize>,
}

fn join_sorted(values: &[usize]) -> String {
    let mut v = values.to_vec();
    v.sort_unstable();
    v.dedup();
    let mut out = String::new();
    for (i, x) in v.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{x}");
    }
    out
}

/// Instruction text with the table's dimensions and the 1-based parameters
/// substituted into the template.
pub fn render_instruction(spec: &InstructionSpec, s: &TableStructure) -> Result<String, InstructionError> {
    use InstructionSpec::*;
    spec.check(s)?;
    let (n, m) = (s.n_rows, s.n_cols);
    Ok(match spec {
        AllCells => "Recognize all cells.".to_string(),
        AllCellsWithRows => format!("Recognize all cells, the table has {n} rows."),
        AllCellsWithColumns => format!("Recognize all cells, the table has {m} columns."),
        AllCellsWithRowsAndColumns => format!("Recognize all cells, the table has {n} rows and {m} columns."),
        InRows { rows } => format!("Cells in the {} rows.", join_sorted(rows)),
        InColumns { cols } => format!("Cells in the {} columns.", join_sorted(cols)),
        AtPosition { row, col } => format!("Cells in the {row} row and the {col} column."),
        AroundPosition { row, col } => format!("Cells around the cell in the {row} row and the {col} column."),
        EmptyCells => "Recognize all empty cells.".to_string(),
        NonEmptyCells => "Recognize all non-empty cells.".to_string(),
        MergedRows => "Cells merged across multiple rows.".to_string(),
        MergedColumns => "Cells merged across multiple columns.".to_string(),
        MergedRowsAndColumns => "Cells merged across multiple rows and multiple columns.".to_string(),
    })
}

/// The fixed instruction used at prediction time.
pub fn prediction_instruction() -> &'static str {
    "Recognize all cells"
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetKind {
    FullStructure,
    CellSubset,
}

/// Candidate set of an instruction on a table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetSet {
    pub kind: TargetKind,
    /// Selected cells, unique and ordered by anchor. Empty for full-structure
    /// targets.
    pub cells: Vec<LogicalCell>,
    /// Matrix text for full-structure targets, one cell per line otherwise.
    pub serialized: String,
}

impl TargetSet {
    /// Number of candidates a target can be sampled from.
    pub fn candidate_count(&self) -> usize {
        match self.kind {
            TargetKind::FullStructure => 1,
            TargetKind::CellSubset => self.cells.len(),
        }
    }
}

/// Zero-based half-open rectangle `[r0, r1) x [c0, c1)` of a cell.
fn rect(c: &LogicalCell) -> (usize, usize, usize, usize) {
    (c.anchor_row, c.bottom(), c.anchor_col, c.right())
}

fn serialize_cell(c: &LogicalCell) -> String {
    format!(
        "({},{}) rowspan={} colspan={}",
        c.anchor_row + 1,
        c.anchor_col + 1,
        c.row_span,
        c.col_span
    )
}

/// Filters the table's cells by the instruction's semantics.
pub fn select_targets(spec: &InstructionSpec, s: &TableStructure) -> Result<TargetSet, InstructionError> {
    use InstructionSpec::*;
    spec.check(s)?;
    let keep: Box<dyn Fn(&LogicalCell) -> bool> = match spec {
        AllCells | AllCellsWithRows | AllCellsWithColumns | AllCellsWithRowsAndColumns => {
            let matrix = cells_to_matrix(s)?;
            return Ok(TargetSet {
                kind: TargetKind::FullStructure,
                cells: Vec::new(),
                serialized: matrix.to_text(),
            });
        }
        InRows { rows } => {
            let rows: Vec<usize> = rows.iter().map(|r| r - 1).collect();
            Box::new(move |c| rows.iter().any(|r| (c.anchor_row..c.bottom()).contains(r)))
        }
        InColumns { cols } => {
            let cols: Vec<usize> = cols.iter().map(|c| c - 1).collect();
            Box::new(move |c| cols.iter().any(|k| (c.anchor_col..c.right()).contains(k)))
        }
        AtPosition { row, col } => {
            let (r, k) = (row - 1, col - 1);
            Box::new(move |c| c.covers(r, k))
        }
        AroundPosition { row, col } => {
            let centre = s
                .cells
                .iter()
                .find(|c| c.covers(row - 1, col - 1))
                .map(rect)
                .ok_or_else(|| InstructionError::Table(TableError::NonTiling("position not covered".into())))?;
            let (r0, r1, c0, c1) = centre;
            Box::new(move |c| {
                let (a0, a1, b0, b1) = rect(c);
                if (a0, a1, b0, b1) == centre {
                    return false;
                }
                // Intersects the centre rectangle grown by one in every direction.
                a0 < r1 + 1 && r0 < a1 + 1 && b0 < c1 + 1 && c0 < b1 + 1
            })
        }
        EmptyCells => Box::new(|c| c.is_empty()),
        NonEmptyCells => Box::new(|c| !c.is_empty()),
        MergedRows => Box::new(|c| c.row_span > 1),
        MergedColumns => Box::new(|c| c.col_span > 1),
        MergedRowsAndColumns => Box::new(|c| c.row_span > 1 && c.col_span > 1),
    };
    s.check_tiling()?;
    let cells: Vec<LogicalCell> = s.cells.iter().filter(|c| keep(c)).cloned().collect();
    let serialized = cells.iter().map(serialize_cell).collect::<Vec<_>>().join("\n");
    Ok(TargetSet {
        kind: TargetKind::CellSubset,
        cells,
        serialized,
    })
}

/// A single sampled target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "target_kind")]
pub enum Target {
    FullStructure { target_matrix: CellMatrix },
    CellSubset { target_cells: Vec<LogicalCell> },
}

/// Instruction text, source table and sampled target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainingTriplet {
    pub source_id: String,
    pub instruction: String,
    pub spec: InstructionSpec,
    #[serde(flatten)]
    pub target: Target,
}

/// Bound on template draws in [`sample_triplet`].
pub const MAX_TEMPLATE_DRAWS: usize = 256;

/// Each index is kept with probability 1/2; empty draws are rejected.
fn sample_subset(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    loop {
        let picked: Vec<usize> = (1..=n).filter(|_| rng.random_bool(0.5)).collect();
        if !picked.is_empty() {
            return picked;
        }
    }
}

/// Draws template `index` (0..13) with uniformly sampled parameters.
pub fn sample_spec(index: usize, s: &TableStructure, rng: &mut impl Rng) -> InstructionSpec {
    use InstructionSpec::*;
    match index {
        0 => AllCells,
        1 => AllCellsWithRows,
        2 => AllCellsWithColumns,
        3 => AllCellsWithRowsAndColumns,
        4 => InRows {
            rows: sample_subset(s.n_rows, rng),
        },
        5 => InColumns {
            cols: sample_subset(s.n_cols, rng),
        },
        6 => AtPosition {
            row: rng.random_range(1..=s.n_rows),
            col: rng.random_range(1..=s.n_cols),
        },
        7 => AroundPosition {
            row: rng.random_range(1..=s.n_rows),
            col: rng.random_range(1..=s.n_cols),
        },
        8 => EmptyCells,
        9 => NonEmptyCells,
        10 => MergedRows,
        11 => MergedColumns,
        12 => MergedRowsAndColumns,
        _ => panic!("template index {index} out of range"),
    }
}

/// Draws a template uniformly, binds random parameters, and picks one
/// candidate uniformly. Templates whose candidate set comes out empty are
/// redrawn.
pub fn sample_triplet(
    s: &TableStructure,
    source_id: &str,
    rng: &mut impl Rng,
) -> Result<TrainingTriplet, InstructionError> {
    s.check_tiling()?;
    for _ in 0..MAX_TEMPLATE_DRAWS {
        let spec = sample_spec(rng.random_range(0..TEMPLATE_COUNT), s, rng);
        let targets = select_targets(&spec, s)?;
        let target = match targets.kind {
            TargetKind::FullStructure => Target::FullStructure {
                target_matrix: cells_to_matrix(s)?,
            },
            TargetKind::CellSubset => match targets.cells.choose(rng) {
                Some(cell) => Target::CellSubset {
                    target_cells: vec![cell.clone()],
                },
                None => continue,
            },
        };
        return Ok(TrainingTriplet {
            source_id: source_id.to_string(),
            instruction: render_instruction(&spec, s)?,
            spec,
            target,
        });
    }
    Err(InstructionError::NoValidInstruction(MAX_TEMPLATE_DRAWS))
}

/// True when the triplet's target is one of the candidates its instruction
/// selects from `s`.
pub fn verify_triplet(t: &TrainingTriplet, s: &TableStructure) -> Result<bool, InstructionError> {
    let targets = select_targets(&t.spec, s)?;
    Ok(match (&t.target, targets.kind) {
        (Target::FullStructure { target_matrix }, TargetKind::FullStructure) => {
            target_matrix.to_text() == targets.serialized
        }
        (Target::CellSubset { target_cells }, TargetKind::CellSubset) => {
            target_cells.len() == 1 && targets.cells.contains(&target_cells[0])
        }
        _ => false,
    } && render_instruction(&t.spec, s)? == t.instruction)
}
