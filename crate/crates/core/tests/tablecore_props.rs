use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tabforge_core::tablecore::random::{random_structure, SpanProfile};
use tabforge_core::tablecore::{crop_top_left, inject_merges, remove_implicit, splice, BlockLayout};
use tabforge_core::{cells_to_matrix, detect_implicit, matrix_to_cells, validate_matrix, CellMatrix, LogicalCell, TableStructure};

fn structure(rows: usize, cols: usize, seed: u64) -> TableStructure {
    random_structure(rows, cols, SpanProfile::default(), &mut ChaCha8Rng::seed_from_u64(seed))
}

fn matrix(rows: usize, cols: usize, seed: u64) -> CellMatrix {
    cells_to_matrix(&structure(rows, cols, seed)).unwrap()
}

/// Cells of `s` restricted to the top-left `rows` x `cols` window, spans
/// clipped at the window edge.
fn clipped(s: &TableStructure, rows: usize, cols: usize) -> Vec<(usize, usize, usize, usize)> {
    let mut out: Vec<_> = s
        .cells
        .iter()
        .filter(|c| c.anchor_row < rows && c.anchor_col < cols)
        .map(|c| {
            (
                c.anchor_row,
                c.anchor_col,
                c.bottom().min(rows) - c.anchor_row,
                c.right().min(cols) - c.anchor_col,
            )
        })
        .collect();
    out.sort_unstable();
    out
}

fn shape(s: &TableStructure) -> Vec<(usize, usize, usize, usize)> {
    let mut out: Vec<_> = s.cells.iter().map(|c| (c.anchor_row, c.anchor_col, c.row_span, c.col_span)).collect();
    out.sort_unstable();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn matrix_cells_round_trip(rows in 1usize..=30, cols in 1usize..=30, seed: u64) {
        let m = matrix(rows, cols, seed);
        prop_assert!(validate_matrix(&m).is_valid());
        prop_assert_eq!(cells_to_matrix(&matrix_to_cells(&m).unwrap()).unwrap(), m.clone());
        let text: CellMatrix = m.to_text().parse().unwrap();
        prop_assert_eq!(text, m);
    }

    #[test]
    fn crop_is_valid_and_clips_cells(rows in 1usize..=20, cols in 1usize..=20, seed: u64, fr in 0.0f64..1.0, fc in 0.0f64..1.0) {
        let s = structure(rows, cols, seed);
        let m = cells_to_matrix(&s).unwrap();
        let (r, c) = (1 + (fr * rows as f64) as usize % rows, 1 + (fc * cols as f64) as usize % cols);
        let crop = crop_top_left(&m, r, c).unwrap();
        prop_assert!(validate_matrix(&crop).is_valid());
        prop_assert_eq!(shape(&matrix_to_cells(&crop).unwrap()), clipped(&s, r, c));
    }

    #[test]
    fn out_of_bounds_crop_fails(rows in 1usize..=8, cols in 1usize..=8, seed: u64) {
        let m = matrix(rows, cols, seed);
        prop_assert!(crop_top_left(&m, rows + 1, cols).is_err());
        prop_assert!(crop_top_left(&m, rows, cols + 1).is_err());
        prop_assert!(crop_top_left(&m, 0, cols).is_err());
    }

    #[test]
    fn splice_of_valid_blocks_is_valid(rows in 2usize..=20, cols in 2usize..=20, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rc: Vec<usize> = (1..rows).filter(|_| rand::Rng::random_bool(&mut rng, 0.3)).collect();
        let cc: Vec<usize> = (1..cols).filter(|_| rand::Rng::random_bool(&mut rng, 0.3)).collect();
        let layout = BlockLayout::new(rows, cols, rc, cc).unwrap();
        let blocks: Vec<CellMatrix> = layout
            .regions()
            .iter()
            .map(|r| cells_to_matrix(&random_structure(r.height, r.width, SpanProfile::default(), &mut rng)).unwrap())
            .collect();
        let m = splice(&layout, &blocks).unwrap();
        prop_assert!(validate_matrix(&m).is_valid());
        prop_assert_eq!(m.dims(), (rows, cols));
        for (region, block) in layout.regions().iter().zip(&blocks) {
            for i in 0..region.height {
                for j in 0..region.width {
                    prop_assert_eq!(m.get(region.row + i, region.col + j), block.get(i, j));
                }
            }
        }
    }

    #[test]
    fn merge_injection_keeps_validity_and_dims(rows in 1usize..=15, cols in 1usize..=15, k in 0usize..6, seed: u64) {
        let m = matrix(rows, cols, seed);
        let before = matrix_to_cells(&m).unwrap().cells.len();
        let out = inject_merges(&m, k, &mut ChaCha8Rng::seed_from_u64(seed ^ 1)).unwrap();
        prop_assert!(validate_matrix(&out).is_valid());
        prop_assert_eq!(out.dims(), m.dims());
        prop_assert!(matrix_to_cells(&out).unwrap().cells.len() <= before);
    }

    #[test]
    fn repair_is_clean_and_idempotent(rows in 1usize..=20, cols in 1usize..=20, seed: u64) {
        let profile = SpanProfile { span_probability: 0.5, max_span: 5 };
        let m = cells_to_matrix(&random_structure(rows, cols, profile, &mut ChaCha8Rng::seed_from_u64(seed))).unwrap();
        let once = remove_implicit(&m).unwrap();
        prop_assert!(validate_matrix(&once).is_valid());
        prop_assert!(detect_implicit(&once).unwrap().is_clean());
        prop_assert_eq!(remove_implicit(&once).unwrap(), once);
    }

    /// Re-tiling the recovered cells onto a blank grid covers every
    /// position exactly once, so every region is a full rectangle.
    #[test]
    fn recovered_regions_are_rectangles(rows in 1usize..=20, cols in 1usize..=20, seed: u64) {
        let s = matrix_to_cells(&matrix(rows, cols, seed)).unwrap();
        let mut hits = vec![0u8; rows * cols];
        for c in &s.cells {
            for r in c.anchor_row..c.bottom() {
                for k in c.anchor_col..c.right() {
                    hits[r * cols + k] += 1;
                }
            }
        }
        prop_assert!(hits.iter().all(|&h| h == 1));
    }
}

#[test]
fn full_width_rowspan_gives_one_implicit_row() {
    let s = TableStructure::new(
        3,
        2,
        vec![LogicalCell::new(0, 0, 1, 1), LogicalCell::new(0, 1, 1, 1), LogicalCell::new(1, 0, 2, 2)],
    )
    .unwrap();
    let m = cells_to_matrix(&s).unwrap();
    assert_eq!(m.to_text(), "CC\nCL\nUX");
    let rep = detect_implicit(&m).unwrap();
    assert_eq!(rep.implicit_rows, vec![2]);
    assert!(rep.implicit_cols.is_empty());
    assert_eq!(remove_implicit(&m).unwrap().to_text(), "CC\nCL");
}
