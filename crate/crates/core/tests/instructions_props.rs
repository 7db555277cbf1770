use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use tabforge_core::instructions::{sample_spec, verify_triplet, TargetKind, TEMPLATE_COUNT};
use tabforge_core::tablecore::random::{random_contents, random_structure, SpanProfile};
use tabforge_core::{sample_triplet, select_targets, InstructionSpec, LogicalCell, TableStructure};

fn table(rows: usize, cols: usize, seed: u64) -> TableStructure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = random_structure(rows, cols, SpanProfile { span_probability: 0.35, max_span: 3 }, &mut rng);
    random_contents(&s, 0.3, &mut rng)
}

type Key = (usize, usize);

fn key(c: &LogicalCell) -> Key {
    (c.anchor_row, c.anchor_col)
}

/// Scans grid positions and collects the anchors of the cells covering them.
fn scan(s: &TableStructure, positions: impl Iterator<Item = (usize, usize)>) -> BTreeSet<Key> {
    positions.map(|(r, c)| key(&s.cells[s.cell_at(r, c).unwrap()])).collect()
}

fn oracle(spec: &InstructionSpec, s: &TableStructure) -> BTreeSet<Key> {
    let (n, m) = (s.n_rows, s.n_cols);
    let all = || (0..n).flat_map(move |r| (0..m).map(move |c| (r, c)));
    let by = |f: &dyn Fn(&LogicalCell) -> bool| s.cells.iter().filter(|c| f(c)).map(key).collect();
    match spec {
        InstructionSpec::InRows { rows } => scan(s, all().filter(|(r, _)| rows.contains(&(r + 1)))),
        InstructionSpec::InColumns { cols } => scan(s, all().filter(|(_, c)| cols.contains(&(c + 1)))),
        InstructionSpec::AtPosition { row, col } => scan(s, std::iter::once((row - 1, col - 1))),
        InstructionSpec::AroundPosition { row, col } => {
            let centre = &s.cells[s.cell_at(row - 1, col - 1).unwrap()];
            let (r0, r1) = (centre.anchor_row.saturating_sub(1), (centre.bottom() + 1).min(n));
            let (c0, c1) = (centre.anchor_col.saturating_sub(1), (centre.right() + 1).min(m));
            let mut out = scan(s, all().filter(|&(r, c)| (r0..r1).contains(&r) && (c0..c1).contains(&c)));
            out.remove(&key(centre));
            out
        }
        InstructionSpec::EmptyCells => by(&|c| c.content.as_deref().is_none_or(|t| t.trim().is_empty())),
        InstructionSpec::NonEmptyCells => by(&|c| c.content.as_deref().is_some_and(|t| !t.trim().is_empty())),
        InstructionSpec::MergedRows => by(&|c| c.row_span > 1),
        InstructionSpec::MergedColumns => by(&|c| c.col_span > 1),
        InstructionSpec::MergedRowsAndColumns => by(&|c| c.row_span > 1 && c.col_span > 1),
        _ => BTreeSet::new(),
    }
}

fn selected(spec: &InstructionSpec, s: &TableStructure) -> BTreeSet<Key> {
    select_targets(spec, s).unwrap().cells.iter().map(key).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn selection_matches_grid_scan(rows in 1usize..=10, cols in 1usize..=10, seed: u64, template in 0usize..TEMPLATE_COUNT) {
        let s = table(rows, cols, seed);
        let spec = sample_spec(template, &s, &mut ChaCha8Rng::seed_from_u64(seed ^ 3));
        let t = select_targets(&spec, &s).unwrap();
        if template < 4 {
            prop_assert_eq!(t.kind, TargetKind::FullStructure);
        } else {
            prop_assert_eq!(t.kind, TargetKind::CellSubset);
            prop_assert!(t.cells.iter().all(|c| s.cells.contains(c)));
            prop_assert_eq!(selected(&spec, &s), oracle(&spec, &s));
        }
    }

    #[test]
    fn empty_and_nonempty_partition(rows in 1usize..=10, cols in 1usize..=10, seed: u64) {
        let s = table(rows, cols, seed);
        let e = selected(&InstructionSpec::EmptyCells, &s);
        let ne = selected(&InstructionSpec::NonEmptyCells, &s);
        prop_assert!(e.is_disjoint(&ne));
        prop_assert_eq!(e.len() + ne.len(), s.cells.len());
    }

    #[test]
    fn merged_both_within_each(rows in 1usize..=10, cols in 1usize..=10, seed: u64) {
        let s = table(rows, cols, seed);
        let r = selected(&InstructionSpec::MergedRows, &s);
        let c = selected(&InstructionSpec::MergedColumns, &s);
        let both = selected(&InstructionSpec::MergedRowsAndColumns, &s);
        let inter: BTreeSet<Key> = r.intersection(&c).copied().collect();
        prop_assert!(both.is_subset(&inter));
    }

    #[test]
    fn triplets_are_seeded_and_verified(rows in 1usize..=10, cols in 1usize..=10, seed: u64) {
        let s = table(rows, cols, seed);
        let a = sample_triplet(&s, "t", &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let b = sample_triplet(&s, "t", &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(verify_triplet(&a, &s).unwrap());
    }
}

/// A 5x5 table where every template has candidates, so template draws are
/// never rejected and each of the 13 should come up about equally often.
#[test]
fn template_draws_are_uniform() {
    let mut cells = vec![
        LogicalCell::new(0, 0, 2, 2).with_content("a"),
        LogicalCell::new(0, 2, 1, 3).with_content("b"),
        LogicalCell::new(1, 2, 2, 1),
    ];
    for r in 1..5 {
        for c in 0..5 {
            let covered = cells.iter().any(|x| x.covers(r, c));
            if !covered {
                let cell = LogicalCell::new(r, c, 1, 1);
                cells.push(if (r + c) % 3 == 0 { cell } else { cell.with_content("v") });
            }
        }
    }
    let s = TableStructure::new(5, 5, cells).unwrap();
    s.check_tiling().unwrap();
    let n = 13_000usize;
    let mut counts = [0usize; TEMPLATE_COUNT];
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..n {
        let t = sample_triplet(&s, "u", &mut rng).unwrap();
        counts[t.spec.template_index()] += 1;
    }
    let p = 1.0 / TEMPLATE_COUNT as f64;
    let mean = n as f64 * p;
    let sd = (n as f64 * p * (1.0 - p)).sqrt();
    for (i, &c) in counts.iter().enumerate() {
        assert!((c as f64 - mean).abs() <= 3.0 * sd, "template {i}: {c} draws, expected {mean:.0} +- {:.0}", 3.0 * sd);
    }
}
