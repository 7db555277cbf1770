//! Seeded fixtures shared by the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tabforge_core::tablecore::inject_merges;
use tabforge_core::tablecore::random::{random_contents, random_structure, SpanProfile};
use tabforge_core::{cells_to_matrix, matrix_to_cells, structure_to_html, Corpus, CorpusRecord, EmitMode, TableStructure};

const SPARSE_SPANS: SpanProfile = SpanProfile {
    span_probability: 0.05,
    max_span: 2,
};

/// A filled `rows` x `cols` table.
pub fn table(rows: usize, cols: usize, seed: u64) -> TableStructure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_contents(&random_structure(rows, cols, SPARSE_SPANS, &mut rng), 0.1, &mut rng)
}

/// Ground truth and a prediction that merges a few cells and refills all
/// contents, both as HTML.
pub fn scoring_pair(rows: usize, cols: usize, seed: u64) -> (String, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = random_structure(rows, cols, SPARSE_SPANS, &mut rng);
    let gt = random_contents(&s, 0.1, &mut rng);
    let merged = inject_merges(&cells_to_matrix(&s).unwrap(), rows.min(cols) / 3, &mut rng).unwrap();
    let pred = random_contents(&matrix_to_cells(&merged).unwrap(), 0.1, &mut rng);
    (html(&pred), html(&gt))
}

pub fn html(s: &TableStructure) -> String {
    structure_to_html(s, EmitMode::WithContent).unwrap()
}

/// A small corpus of large tables for synthesis.
pub fn corpus(n: usize, seed: u64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let records = (0..n)
        .map(|i| {
            let s = random_contents(&random_structure(24, 24, SpanProfile::default(), &mut rng), 0.1, &mut rng);
            CorpusRecord::new(format!("c{i:02}"), s, true).unwrap()
        })
        .collect();
    Corpus::from_records(records).unwrap()
}
