use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tabforge_core::tablecore::random::{random_contents, random_structure, SpanProfile};
use tabforge_core::{parse_table_html, structure_to_html, teds, EmitMode, TableStructure, TedsConfig};

fn filled(rows: usize, cols: usize, seed: u64) -> TableStructure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = random_structure(rows, cols, SpanProfile::default(), &mut rng);
    random_contents(&s, 0.2, &mut rng)
}

fn html(s: &TableStructure) -> String {
    structure_to_html(s, EmitMode::WithContent).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn parse_emit_identity(rows in 1usize..=15, cols in 1usize..=15, seed: u64, header in 0usize..3) {
        let mut s = filled(rows, cols, seed);
        // Header rows must be a clean band: only mark cells wholly inside it.
        let band = header.min(rows);
        let crossing = s.cells.iter().any(|c| c.anchor_row < band && c.bottom() > band);
        if !crossing {
            for c in &mut s.cells {
                c.is_header = c.anchor_row < band;
            }
        }
        let doc = parse_table_html(&html(&s)).unwrap();
        prop_assert_eq!(doc.structure, s);
    }

    #[test]
    fn structural_emit_empties_contents(rows in 1usize..=15, cols in 1usize..=15, seed: u64) {
        let s = filled(rows, cols, seed);
        let doc = parse_table_html(&structure_to_html(&s, EmitMode::StructuralOnly).unwrap()).unwrap();
        prop_assert!(doc.structure.same_shape(&s));
        prop_assert!(doc.structure.cells.iter().all(|c| c.content.is_none()));
    }

    #[test]
    fn teds_bounds_symmetry_identity(r1 in 1usize..=6, c1 in 1usize..=6, r2 in 1usize..=6, c2 in 1usize..=6, seed: u64) {
        let (a, b) = (html(&filled(r1, c1, seed)), html(&filled(r2, c2, seed ^ 7)));
        for cfg in [TedsConfig::full(), TedsConfig::structure()] {
            let ab = teds(&a, &b, &cfg).unwrap().value;
            let ba = teds(&b, &a, &cfg).unwrap().value;
            prop_assert!((0.0..=1.0).contains(&ab));
            prop_assert!((ab - ba).abs() < 1e-12);
            prop_assert_eq!(teds(&a, &a, &cfg).unwrap().value, 1.0);
        }
    }

    #[test]
    fn structure_score_ignores_contents(rows in 1usize..=12, cols in 1usize..=12, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_structure(rows, cols, SpanProfile::default(), &mut rng);
        let f = random_contents(&s, 0.3, &mut rng);
        let g = random_contents(&s, 0.3, &mut rng);
        prop_assert_eq!(teds(&html(&f), &html(&g), &TedsConfig::structure()).unwrap().value, 1.0);
    }
}
