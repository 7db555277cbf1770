use super::ted::TedScratch;
use super::teds::{prepare_tree, prepared_distance, prepared_distances, score_from, TedsConfig};
use super::tree::build_tree_with;
use crate::htmlcodec::{parse_table_html, HtmlError};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One line of the paired scoring input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScorePair {
    pub id: String,
    pub pred_html: String,
    pub gt_html: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleScore {
    pub id: String,
    /// Full TEDS; absent for structure-only runs.
    pub teds: Option<f64>,
    pub s_teds: f64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub pred_malformed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub count: usize,
    /// Mean TEDS, or `None` when undefined (no samples or structure-only).
    pub mean_teds: Option<f64>,
    pub mean_s_teds: Option<f64>,
    pub malformed_predictions: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchReport {
    pub samples: Vec<SampleScore>,
    pub summary: BatchSummary,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BatchError {
    #[error("ground truth for {id} is malformed: {source}")]
    GroundTruthMalformed { id: String, source: HtmlError },
}

thread_local! {
    // Large trees need tens of megabytes of working memory; keep it per thread.
    static SCRATCH: std::cell::RefCell<TedScratch<[f64; 2]>> = std::cell::RefCell::default();
    static STRUCTURE_SCRATCH: std::cell::RefCell<TedScratch<f64>> = std::cell::RefCell::default();
}

fn score_pair(pair: &ScorePair, cfg: &TedsConfig, scratch: &mut TedScratch<[f64; 2]>) -> Result<SampleScore, BatchError> {
    let gt = parse_table_html(&pair.gt_html).map_err(|source| BatchError::GroundTruthMalformed {
        id: pair.id.clone(),
        source,
    })?;
    let pred = match parse_table_html(&pair.pred_html) {
        Ok(doc) => doc,
        Err(e) => {
            return Ok(SampleScore {
                id: pair.id.clone(),
                teds: (!cfg.structure_only).then_some(0.0),
                s_teds: 0.0,
                pred_malformed: true,
                error: Some(e.to_string()),
            })
        }
    };
    let a = prepare_tree(&build_tree_with(&pred, cfg.wrap_bare_rows));
    let b = prepare_tree(&build_tree_with(&gt, cfg.wrap_bare_rows));
    let score = |d| score_from(d, a.len(), b.len()).value;
    let (s_teds, teds) = if cfg.structure_only {
        (score(STRUCTURE_SCRATCH.with_borrow_mut(|st| prepared_distance(st, &a, &b, true))), None)
    } else {
        let [structural, full] = prepared_distances(scratch, &a, &b);
        (score(structural), Some(score(full)))
    };
    Ok(SampleScore {
        id: pair.id.clone(),
        teds,
        s_teds,
        pred_malformed: false,
        error: None,
    })
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Scores every pair in parallel. Results keep the input order. Unparseable
/// predictions score 0 and are flagged; an unparseable ground truth fails
/// the batch (the first such pair in input order is reported).
pub fn batch_score(pairs: &[ScorePair], cfg: &TedsConfig) -> Result<BatchReport, BatchError> {
    let results: Vec<Result<SampleScore, BatchError>> = pairs.par_iter().map(|p| SCRATCH.with_borrow_mut(|scratch| score_pair(p, cfg, scratch))).collect();
    let samples = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let summary = BatchSummary {
        count: samples.len(),
        mean_teds: if cfg.structure_only {
            None
        } else {
            mean(samples.iter().filter_map(|s| s.teds))
        },
        mean_s_teds: mean(samples.iter().map(|s| s.s_teds)),
        malformed_predictions: samples.iter().filter(|s| s.pred_malformed).count(),
    };
    Ok(BatchReport { samples, summary })
}
