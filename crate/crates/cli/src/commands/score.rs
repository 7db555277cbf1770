use super::{emit_line, finish, output, read_text};
use crate::exit::{CmdResult, Failure};
use serde::{Deserialize, Serialize};
use std::collections::{HashMap, HashSet};
use std::path::{Path, PathBuf};
use tabforge_core::metrics::{BatchError, BatchSummary, ScorePair};
use tabforge_core::{batch_score, TedsConfig};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// Predictions, one `{"id", "html"}` object per line.
    #[arg(long, requires = "gt", conflicts_with = "pairs")]
    pub pred: Option<PathBuf>,
    /// Ground truth in the same layout as --pred.
    #[arg(long, requires = "pred")]
    pub gt: Option<PathBuf>,
    /// Paired input, one `{"id", "pred_html", "gt_html"}` object per line.
    #[arg(long)]
    pub pairs: Option<PathBuf>,
    /// Skip the content-aware score and report S-TEDS only.
    #[arg(long)]
    pub structure_only: bool,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
struct HtmlLine {
    id: String,
    html: String,
}

#[derive(Serialize)]
struct SummaryLine<'a> {
    summary: &'a BatchSummary,
}

fn read_jsonl<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>, Failure> {
    read_text(path)?
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l)
                .map_err(|e| Failure::External(format!("{} line {}: {e}", path.display(), i + 1)))
        })
        .collect()
}

fn check_unique<'a>(ids: impl Iterator<Item = &'a str>, what: &str) -> Result<(), Failure> {
    let mut seen = HashSet::new();
    for id in ids {
        if !seen.insert(id) {
            return Err(Failure::Usage(format!("duplicate id {id:?} in {what}")));
        }
    }
    Ok(())
}

/// Pairs predictions with ground truth in ground-truth order. Every id must
/// appear exactly once on each side.
fn align(pred: Vec<HtmlLine>, gt: Vec<HtmlLine>) -> Result<Vec<ScorePair>, Failure> {
    check_unique(pred.iter().map(|l| l.id.as_str()), "predictions")?;
    check_unique(gt.iter().map(|l| l.id.as_str()), "ground truth")?;
    let mut by_id: HashMap<String, String> = pred.into_iter().map(|l| (l.id, l.html)).collect();
    let mut pairs = Vec::with_capacity(gt.len());
    let mut missing = Vec::new();
    for g in gt {
        match by_id.remove(&g.id) {
            Some(p) => pairs.push(ScorePair {
                id: g.id,
                pred_html: p,
                gt_html: g.html,
            }),
            None => missing.push(g.id),
        }
    }
    let mut extra: Vec<String> = by_id.into_keys().collect();
    extra.sort();
    if !missing.is_empty() || !extra.is_empty() {
        return Err(Failure::Usage(format!(
            "ids do not align: {} without prediction {:?}, {} without ground truth {:?}",
            missing.len(),
            missing.iter().take(5).collect::<Vec<_>>(),
            extra.len(),
            extra.iter().take(5).collect::<Vec<_>>()
        )));
    }
    Ok(pairs)
}

pub fn run(args: Args) -> CmdResult {
    let pairs: Vec<ScorePair> = match (&args.pred, &args.gt, &args.pairs) {
        (Some(p), Some(g), None) => align(read_jsonl(p)?, read_jsonl(g)?)?,
        (None, None, Some(path)) => {
            let pairs: Vec<ScorePair> = read_jsonl(path)?;
            check_unique(pairs.iter().map(|p| p.id.as_str()), "pairs")?;
            pairs
        }
        _ => return Err(Failure::Usage("give either --pred and --gt, or --pairs".into())),
    };
    let cfg = if args.structure_only {
        TedsConfig::structure()
    } else {
        TedsConfig::full()
    };
    let report = batch_score(&pairs, &cfg).map_err(|e| match e {
        BatchError::GroundTruthMalformed { .. } => Failure::External(e.to_string()),
    })?;
    let mut out = output(args.out.as_deref())?;
    for s in &report.samples {
        emit_line(&mut out, s)?;
    }
    emit_line(&mut out, &SummaryLine { summary: &report.summary })?;
    finish(out)?;

    let fmt = |v: Option<f64>| v.map_or("n/a".to_string(), |v| format!("{v:.4}"));
    let sum = &report.summary;
    eprintln!(
        "scored {} pair(s): mean TEDS {}, mean S-TEDS {}, malformed predictions {}",
        sum.count,
        fmt(sum.mean_teds),
        fmt(sum.mean_s_teds),
        sum.malformed_predictions
    );
    if sum.malformed_predictions > 0 {
        return Err(Failure::Findings(format!(
            "{} prediction(s) could not be parsed and scored 0",
            sum.malformed_predictions
        )));
    }
    Ok(())
}
