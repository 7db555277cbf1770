//! Content population and judging interfaces, with offline implementations.

use crate::htmlcodec::{parse_table_html, structure_to_html, EmitMode, HtmlError};
use crate::tablecore::{cells_to_matrix, detect_implicit};
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClientError {
    #[error("transport: {0}")]
    Transport(String),
    #[error("unusable response: {0}")]
    Protocol(String),
    #[error("configuration: {0}")]
    Config(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationRequest {
    pub record_id: String,
    /// 1-based attempt number.
    pub attempt: usize,
    pub seed: u64,
    pub structural_html: String,
}

/// Fills an empty structural table with content. Output is checked by the
/// caller, never trusted.
pub trait ContentGenerator: Send + Sync {
    fn populate(&self, req: &GenerationRequest) -> Result<String, ClientError>;

    /// False when calls must not overlap; the batch driver then runs serially.
    fn concurrent(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub accept: bool,
    pub reason: String,
}

impl Verdict {
    pub fn accept() -> Self {
        Verdict {
            accept: true,
            reason: "ok".into(),
        }
    }

    pub fn reject(reason: impl Into<String>) -> Self {
        Verdict {
            accept: false,
            reason: reason.into(),
        }
    }
}

pub trait TableValidator: Send + Sync {
    fn judge(&self, structural_html: &str, filled_html: &str) -> Result<Verdict, ClientError>;

    fn concurrent(&self) -> bool {
        true
    }
}

/// Offline generator writing `cell-<row>-<col>` into each cell and leaving a
/// seed-chosen fraction of cells empty.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeterministicFiller {
    pub empty_fraction: f64,
}

pub fn deterministic_filler(empty_fraction: f64) -> DeterministicFiller {
    DeterministicFiller { empty_fraction }
}

impl Default for DeterministicFiller {
    fn default() -> Self {
        DeterministicFiller { empty_fraction: 0.1 }
    }
}

impl DeterministicFiller {
    pub fn fill(&self, structural_html: &str, seed: u64) -> Result<String, HtmlError> {
        let mut s = parse_table_html(structural_html)?.structure;
        let n = s.cells.len();
        let n_empty = ((self.empty_fraction * n as f64).round() as usize).min(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut empty = vec![false; n];
        for i in index::sample(&mut rng, n, n_empty) {
            empty[i] = true;
        }
        for (cell, is_empty) in s.cells.iter_mut().zip(empty) {
            cell.content = (!is_empty).then(|| format!("cell-{}-{}", cell.anchor_row, cell.anchor_col));
        }
        structure_to_html(&s, EmitMode::WithContent)
    }
}

impl ContentGenerator for DeterministicFiller {
    fn populate(&self, req: &GenerationRequest) -> Result<String, ClientError> {
        self.fill(&req.structural_html, req.seed ^ req.attempt as u64)
            .map_err(|e| ClientError::Protocol(e.to_string()))
    }
}

/// Offline judge: accepts when the filled table parses, matches the target
/// grid cell for cell, and has no implicit rows or columns.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StructuralValidator;

pub fn structural_validator() -> StructuralValidator {
    StructuralValidator
}

impl TableValidator for StructuralValidator {
    fn judge(&self, structural_html: &str, filled_html: &str) -> Result<Verdict, ClientError> {
        let filled = match parse_table_html(filled_html) {
            Ok(doc) => doc.structure,
            Err(HtmlError::OverlappingSpans { row, col }) => {
                return Ok(Verdict::reject(format!("overlapping_spans:{row},{col}")))
            }
            Err(e) => return Ok(Verdict::reject(format!("malformed:{e}"))),
        };
        let target = parse_table_html(structural_html)
            .map_err(|e| ClientError::Protocol(format!("target table: {e}")))?
            .structure;
        if !filled.same_shape(&target) {
            return Ok(Verdict::reject("structure_mismatch"));
        }
        let matrix = cells_to_matrix(&filled).map_err(|e| ClientError::Protocol(e.to_string()))?;
        let report = detect_implicit(&matrix).map_err(|e| ClientError::Protocol(e.to_string()))?;
        if let Some(r) = report.implicit_rows.first() {
            return Ok(Verdict::reject(format!("implicit_row:{r}")));
        }
        if let Some(c) = report.implicit_cols.first() {
            return Ok(Verdict::reject(format!("implicit_col:{c}")));
        }
        Ok(Verdict::accept())
    }
}

/// Accepts everything.
#[derive(Debug, Clone, Copy, Default)]
pub struct AcceptAll;

impl TableValidator for AcceptAll {
    fn judge(&self, _: &str, _: &str) -> Result<Verdict, ClientError> {
        Ok(Verdict::accept())
    }
}
