use super::config::{DimMode, SynthConfig};
use super::content::{ContentGenerator, GenerationRequest, TableValidator};
use super::sampling::{fill_block, partition_grid, sample_dims_bcdstab, sample_dims_uniform};
use super::SynthError;
use crate::corpus::Corpus;
use crate::htmlcodec::{parse_table_html, structure_to_html, EmitMode};
use crate::render::{sample_style, StyleAugmentation};
use crate::tablecore::{
    detect_implicit, inject_merges_keeping_lines, matrix_to_cells, splice, validate_matrix, CellMatrix, Region,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSource {
    pub region: Region,
    pub source_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationOutcome {
    pub attempts: usize,
    pub accepted: bool,
    pub reason: String,
}

/// One synthesized table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthRecord {
    pub id: String,
    pub seed: u64,
    pub matrix: CellMatrix,
    pub structural_html: String,
    /// Last generator output whose structure matched; `None` if none did.
    pub filled_html: Option<String>,
    pub style: StyleAugmentation,
    pub provenance: Vec<BlockSource>,
    pub validation: ValidationOutcome,
}

/// Mixes a batch seed with a record index (splitmix64 finalizer).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn record_id(index: usize) -> String {
    format!("tme-{index:06}")
}

/// Steps up to merge injection: dimensions, layout, block crops, splice,
/// merges. The result is valid and has no implicit lines.
pub fn build_matrix(
    cfg: &SynthConfig,
    corpus: &Corpus,
    rng: &mut impl Rng,
) -> Result<(CellMatrix, Vec<BlockSource>), SynthError> {
    let (rows, cols) = match cfg.dim_mode {
        DimMode::UniformRange => sample_dims_uniform(&cfg.uniform, rng),
        DimMode::Bcdstab => sample_dims_bcdstab(&cfg.bcdstab, rng)?,
    };
    let layout = partition_grid(rows, cols, cfg.n_blocks, rng)?;
    // A crop may end in a column of L tokens (or a row of U tokens) that a
    // neighbouring block does not anchor; such splices are redrawn whole.
    let mut clean = None;
    for _ in 0..cfg.clean_splice_retries {
        let mut blocks = Vec::with_capacity(cfg.n_blocks);
        let mut provenance = Vec::with_capacity(cfg.n_blocks);
        for region in layout.regions() {
            let (block, source_id) = fill_block(region.height, region.width, corpus, rng)?;
            blocks.push(block);
            provenance.push(BlockSource { region, source_id });
        }
        let spliced = splice(&layout, &blocks)?;
        if detect_implicit(&spliced)?.is_clean() {
            clean = Some((spliced, provenance));
            break;
        }
    }
    let (spliced, provenance) = clean.ok_or(SynthError::ImplicitLinesExhausted {
        rows,
        cols,
        budget: cfg.clean_splice_retries,
    })?;
    let matrix = inject_merges_keeping_lines(&spliced, cfg.merge_injections, rng)?;
    let report = validate_matrix(&matrix);
    if !report.is_valid() {
        return Err(SynthError::Internal(format!("synthesized matrix is invalid: {report}")));
    }
    if !detect_implicit(&matrix)?.is_clean() {
        return Err(SynthError::Internal("synthesized matrix has implicit lines".into()));
    }
    Ok((matrix, provenance))
}

/// Runs the full pipeline for one record. Generator output that fails to
/// parse or differs in structure is rejected before judging. Running out of
/// attempts yields a record with `accepted = false`.
pub fn synthesize_one(
    cfg: &SynthConfig,
    corpus: &Corpus,
    generator: &dyn ContentGenerator,
    validator: &dyn TableValidator,
    id: &str,
    seed: u64,
) -> Result<SynthRecord, SynthError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (matrix, provenance) = build_matrix(cfg, corpus, &mut rng)?;
    let structure = matrix_to_cells(&matrix)?;
    let structural_html = structure_to_html(&structure, EmitMode::StructuralOnly)?;
    let style = sample_style(&mut rng);
    let content_seed: u64 = rng.random();

    let client_err = |source| SynthError::Client {
        record_id: id.to_string(),
        source,
    };
    let max_attempts = 1 + cfg.max_validation_retries;
    let mut filled_html = None;
    let mut validation = ValidationOutcome {
        attempts: 0,
        accepted: false,
        reason: String::new(),
    };
    for attempt in 1..=max_attempts {
        validation.attempts = attempt;
        let req = GenerationRequest {
            record_id: id.to_string(),
            attempt,
            seed: content_seed,
            structural_html: structural_html.clone(),
        };
        let filled = generator.populate(&req).map_err(client_err)?;
        match parse_table_html(&filled) {
            Err(e) => {
                validation.reason = format!("unparseable:{e}");
                continue;
            }
            Ok(doc) if !doc.structure.same_shape(&structure) => {
                validation.reason = "structure_mismatch".into();
                continue;
            }
            Ok(_) => {}
        }
        let verdict = validator.judge(&structural_html, &filled).map_err(client_err)?;
        filled_html = Some(filled);
        validation.reason = verdict.reason;
        if verdict.accept {
            validation.accepted = true;
            break;
        }
    }
    Ok(SynthRecord {
        id: id.to_string(),
        seed,
        matrix,
        structural_html,
        filled_html,
        style,
        provenance,
        validation,
    })
}

/// Produces `count` records. Record `i` is seeded from `(cfg.seed, i)`, so
/// output is independent of scheduling. Per-record failures are returned in
/// place without stopping the batch. Defective corpus records are repaired
/// before use.
pub fn synthesize_batch(
    cfg: &SynthConfig,
    corpus: &Corpus,
    generator: &dyn ContentGenerator,
    validator: &dyn TableValidator,
    count: usize,
    threads: Option<usize>,
) -> Result<Vec<Result<SynthRecord, SynthError>>, SynthError> {
    cfg.validate()?;
    let repaired;
    let corpus = if corpus.has_implicit_lines() {
        repaired = corpus.repaired();
        &repaired
    } else {
        corpus
    };
    let one = |i: usize| synthesize_one(cfg, corpus, generator, validator, &record_id(i), derive_seed(cfg.seed, i as u64));
    let serial = threads == Some(1) || !generator.concurrent() || !validator.concurrent();
    if serial {
        return Ok((0..count).map(one).collect());
    }
    let run = || (0..count).into_par_iter().map(one).collect();
    match threads {
        None => Ok(run()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| SynthError::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(run))
        }
    }
}
