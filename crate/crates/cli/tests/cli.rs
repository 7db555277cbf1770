mod common;

use common::*;
use tabforge_core::corpus::{load_annotations, CorpusFormat, LoadOptions};
use tabforge_core::instructions::verify_triplet;
use tabforge_core::metrics::ScorePair;
use tabforge_core::{CellMatrix, Token, TrainingTriplet};
use tempfile::tempdir;

fn path(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_valid_matrix() {
    let o = tabforge(&["validate", path(&fixture("valid.txt"))]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let lines = json_lines(&o);
    assert_eq!(lines[0]["valid"], true);
    assert_eq!(lines[0]["implicit_cols"], serde_json::json!([1]));
}

#[test]
fn validate_reports_rule_id() {
    let o = tabforge(&["validate", path(&fixture("bad.txt"))]);
    assert_eq!(code(&o), 1);
    assert_eq!(json_lines(&o)[0]["violations"][0]["rule"], "L_in_column_0");
    assert!(stderr(&o).contains("L_in_column_0"));
}

#[test]
fn validate_missing_file_and_unknown_format() {
    assert_eq!(code(&tabforge(&["validate", "/nonexistent/table.txt"])), 3);
    assert_eq!(code(&tabforge(&["validate", "table.unknown"])), 2);
    assert_eq!(code(&tabforge(&["validate"])), 2);
}

#[test]
fn validate_html_inputs() {
    let dir = tempdir().unwrap();
    let overlap = dir.path().join("overlap.html");
    std::fs::write(
        &overlap,
        "<table><tr><td>a</td><td rowspan=2>b</td></tr><tr><td colspan=2>c</td></tr></table>",
    )
    .unwrap();
    let o = tabforge(&["validate", path(&fixture("implicit_row.html")), path(&overlap)]);
    assert_eq!(code(&o), 1);
    let lines = json_lines(&o);
    assert_eq!(lines[0]["valid"], true);
    assert_eq!(lines[0]["implicit_rows"], serde_json::json!([2]));
    assert_eq!(lines[1]["valid"], false);
}

#[test]
fn convert_spanning_matrix() {
    let o = tabforge(&["convert", path(&fixture("spanning.txt")), "--to", "html"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "<table><tr><td rowspan=\"2\" colspan=\"2\"></td></tr><tr></tr></table>");
}

#[test]
fn convert_round_trip_is_structurally_equal() {
    let dir = tempdir().unwrap();
    let m = dir.path().join("m.txt");
    let o = tabforge(&["convert", path(&fixture("header.html")), "--to", "matrix", "--out", path(&m)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(std::fs::read_to_string(&m).unwrap(), "CLC\nCCC\nCCU\n");
    let back = tabforge(&["convert", path(&m), "--to", "html"]);
    assert_eq!(code(&back), 0);
    // The matrix carries no header markup, so compare grids.
    let original = tabforge_core::parse_table_html(&std::fs::read_to_string(fixture("header.html")).unwrap()).unwrap();
    let again = tabforge_core::parse_table_html(stdout(&back).trim()).unwrap();
    assert!(again.structure.same_shape(&original.structure));
}

#[test]
fn convert_refuses_implicit_rows_without_repair() {
    let o = tabforge(&["convert", path(&fixture("implicit_row.html")), "--to", "matrix"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("implicit rows [2]"), "{}", stderr(&o));
    let o = tabforge(&["convert", path(&fixture("implicit_row.html")), "--to", "matrix", "--repair"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "CC\nCL\n");
}

#[test]
fn convert_rejects_invalid_matrix() {
    assert_eq!(code(&tabforge(&["convert", path(&fixture("bad.txt")), "--to", "html"])), 1);
}

fn write_jsonl<T: serde::Serialize>(p: &std::path::Path, items: &[T]) {
    let text: String = items.iter().map(|i| serde_json::to_string(i).unwrap() + "\n").collect();
    std::fs::write(p, text).unwrap();
}

fn html_lines(p: &std::path::Path, items: &[(&str, &str)]) {
    let v: Vec<_> = items.iter().map(|(id, html)| serde_json::json!({"id": id, "html": html})).collect();
    write_jsonl(p, &v);
}

const T1: &str = "<table><tr><td>a</td><td>b</td></tr><tr><td>c</td><td>d</td></tr></table>";
const T2: &str = "<table><tr><td colspan=\"2\">x</td></tr><tr><td>1</td><td>2</td></tr></table>";

#[test]
fn score_identical_predictions() {
    let dir = tempdir().unwrap();
    let (p, g) = (dir.path().join("p.jsonl"), dir.path().join("g.jsonl"));
    html_lines(&p, &[("b", T2), ("a", T1)]);
    html_lines(&g, &[("a", T1), ("b", T2)]);
    let o = tabforge(&["score", "--pred", path(&p), "--gt", path(&g)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0]["id"], "a");
    assert_eq!(lines[2]["summary"]["mean_teds"], 1.0);
    assert_eq!(lines[2]["summary"]["mean_s_teds"], 1.0);
}

#[test]
fn score_single_rename() {
    // Tree: table, tr x2, td x4 = 7 nodes; one content change costs 1.
    let dir = tempdir().unwrap();
    let pairs = dir.path().join("pairs.jsonl");
    let pred = T1.replace(">d<", ">z<");
    write_jsonl(
        &pairs,
        &[ScorePair {
            id: "x".into(),
            pred_html: pred,
            gt_html: T1.into(),
        }],
    );
    let o = tabforge(&["score", "--pairs", path(&pairs)]);
    assert_eq!(code(&o), 0);
    let lines = json_lines(&o);
    assert!((lines[0]["teds"].as_f64().unwrap() - (1.0 - 1.0 / 7.0)).abs() < 1e-12);
    assert_eq!(lines[0]["s_teds"], 1.0);
    let o = tabforge(&["score", "--pairs", path(&pairs), "--structure-only"]);
    let lines = json_lines(&o);
    assert!(lines[0]["teds"].is_null());
    assert!(lines[1]["summary"]["mean_teds"].is_null());
}

#[test]
fn score_error_codes() {
    let dir = tempdir().unwrap();
    let (p, g) = (dir.path().join("p.jsonl"), dir.path().join("g.jsonl"));
    html_lines(&p, &[("a", T1)]);
    html_lines(&g, &[("a", T1), ("b", T2)]);
    assert_eq!(code(&tabforge(&["score", "--pred", path(&p), "--gt", path(&g)])), 2);

    html_lines(&p, &[("a", T1)]);
    html_lines(&g, &[("a", "<table><tr><td>")]);
    assert_eq!(code(&tabforge(&["score", "--pred", path(&p), "--gt", path(&g)])), 3);

    html_lines(&p, &[("a", "<div>nothing</div>")]);
    html_lines(&g, &[("a", T1)]);
    let o = tabforge(&["score", "--pred", path(&p), "--gt", path(&g)]);
    assert_eq!(code(&o), 1);
    let lines = json_lines(&o);
    assert_eq!(lines[0]["teds"], 0.0);
    assert_eq!(lines[0]["pred_malformed"], true);

    assert_eq!(code(&tabforge(&["score", "--pred", path(&p)])), 2);
    assert_eq!(code(&tabforge(&["score"])), 2);
}

#[test]
fn score_golden_file_is_stable() {
    use rand::SeedableRng;
    use tabforge_core::tablecore::random::{random_contents, random_structure, SpanProfile};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let pairs: Vec<ScorePair> = (0..100)
        .map(|i| {
            let s = random_structure(1 + i % 7, 1 + i % 5, SpanProfile::default(), &mut rng);
            let gt = random_contents(&s, 0.2, &mut rng);
            let pred = random_contents(&s, 0.2, &mut rng);
            let emit = |s| tabforge_core::structure_to_html(s, tabforge_core::EmitMode::WithContent).unwrap();
            ScorePair {
                id: format!("p{i:03}"),
                pred_html: emit(&pred),
                gt_html: emit(&gt),
            }
        })
        .collect();
    let dir = tempdir().unwrap();
    let f = dir.path().join("pairs.jsonl");
    write_jsonl(&f, &pairs);
    let a = tabforge(&["score", "--pairs", path(&f)]);
    let b = tabforge(&["score", "--pairs", path(&f)]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let lines = json_lines(&a);
    assert_eq!(lines.len(), 101);
    // Same structures: every S-TEDS is exactly 1.
    assert!(lines[..100].iter().all(|l| l["s_teds"] == 1.0));
}

#[test]
fn synthesize_writes_dataset() {
    let dir = tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    write_html_corpus(&corpus, 8, 1);
    let out = dir.path().join("out");
    let o = tabforge(&["synthesize", "--corpus", path(&corpus), "--count", "5", "--out", path(&out), "--seed", "4"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stderr(&o).contains("accepted=5"), "{}", stderr(&o));
    assert_eq!(json_lines(&o)[0]["accepted"], 5);
    for f in ["records.jsonl", "summary.json", "render_manifest.json", "config.toml", "html/tme-000004.html", "matrix/tme-000000.txt"] {
        assert!(out.join(f).exists(), "missing {f}");
    }
    // A second run into the same directory is refused.
    let again = tabforge(&["synthesize", "--corpus", path(&corpus), "--count", "5", "--out", path(&out)]);
    assert_eq!(code(&again), 2);
}

#[test]
fn synthesize_usage_and_client_errors() {
    let dir = tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    write_html_corpus(&corpus, 4, 2);
    let out = dir.path().join("out");
    let args = |count: &'static str| vec!["synthesize", "--corpus", path(&corpus), "--count", count, "--out", path(&out)];
    let mut a = args("0");
    assert_eq!(code(&tabforge(&a)), 2);
    a = args("1");
    a.extend(["--threads", "0"]);
    assert_eq!(code(&tabforge(&a)), 2);

    let cfg = dir.path().join("ext.toml");
    std::fs::write(&cfg, "content_mode = \"external\"\n").unwrap();
    let mut a = args("1");
    a.extend(["--config", path(&cfg)]);
    assert_eq!(code(&tabforge(&a)), 3, "external mode without an endpoint");
    a.push("--offline");
    assert_eq!(code(&tabforge(&a)), 0);

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "n_blocks = 0\n").unwrap();
    let mut a = args("1");
    a.extend(["--config", path(&bad)]);
    assert_eq!(code(&tabforge(&a)), 2);
}

#[test]
fn instruct_triplets_verify_and_reproduce() {
    let corpus = fixture("corpus_small.jsonl");
    let args = ["instruct", "--corpus", path(&corpus), "--count", "60", "--seed", "9"];
    let a = tabforge(&args);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(a.stdout, tabforge(&args).stdout);
    let c = load_annotations(&corpus, CorpusFormat::PubtabnetJsonl, LoadOptions::default()).unwrap();
    let lines: Vec<TrainingTriplet> = stdout(&a).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 60);
    for t in &lines {
        let rec = c.get(&t.source_id).unwrap();
        assert!(verify_triplet(t, &rec.structure).unwrap(), "{t:?}");
    }
}

#[test]
fn instruct_zero_count() {
    let o = tabforge(&["instruct", "--corpus", path(&fixture("corpus_small.jsonl")), "--count", "0"]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
}

#[test]
fn audit_defective_fixture() {
    let o = tabforge(&["audit", "--corpus", path(&fixture("corpus_small.jsonl"))]);
    assert_eq!(code(&o), 0);
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0]["id"], "implicit_row.png");
    assert_eq!(lines[0]["implicit_rows"], serde_json::json!([2]));
    assert_eq!(lines[1]["implicit_cols"], serde_json::json!([2]));
    let s = &lines[2]["summary"];
    assert_eq!(s["total_records"], 4);
    assert_eq!(s["affected_records"], 2);
    assert_eq!(s["total_implicit_rows"], 1);
    assert_eq!(s["total_implicit_cols"], 1);
    assert!(stderr(&o).contains("0.5000"));
}

#[test]
fn audit_clean_fixture() {
    let dir = tempdir().unwrap();
    let clean = dir.path().join("clean.jsonl");
    let text = std::fs::read_to_string(fixture("corpus_small.jsonl")).unwrap();
    std::fs::write(&clean, text.lines().take(2).collect::<Vec<_>>().join("\n")).unwrap();
    let o = tabforge(&["audit", "--corpus", path(&clean)]);
    assert_eq!(code(&o), 0);
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0]["summary"]["affected_records"], 0);
    assert_eq!(lines[0]["summary"]["total_implicit_rows"], 0);
    assert!(stderr(&o).contains("0.0000"));
}

#[test]
fn audit_missing_corpus() {
    assert_eq!(code(&tabforge(&["audit", "--corpus", "/nonexistent/corpus.jsonl"])), 3);
}

/// Cells are `C` tokens; a cell is merged when its right neighbour is `L`
/// or the token below is `U`.
fn hand_tally(m: &CellMatrix) -> (usize, usize) {
    let (mut cells, mut merged) = (0, 0);
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if m.get(r, c) != Token::Anchor {
                continue;
            }
            cells += 1;
            let right = c + 1 < m.cols() && m.get(r, c + 1) == Token::Left;
            let down = r + 1 < m.rows() && m.get(r + 1, c) == Token::Up;
            if right || down {
                merged += 1;
            }
        }
    }
    (cells, merged)
}

#[test]
fn stats_match_hand_tally() {
    let dir = tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    write_html_corpus(&corpus, 6, 5);
    let out = dir.path().join("out");
    let o = tabforge(&["synthesize", "--corpus", path(&corpus), "--count", "5", "--out", path(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));

    let o = tabforge(&["stats", "--dataset", path(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stderr(&o).contains("token_ratio"));
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 6);
    let records = std::fs::read_to_string(out.join("records.jsonl")).unwrap();
    let mut cell_hist = std::collections::BTreeMap::<String, u64>::new();
    for (line, rec) in lines.iter().zip(records.lines()) {
        let rec: serde_json::Value = serde_json::from_str(rec).unwrap();
        let m: CellMatrix = serde_json::from_value(rec["matrix"].clone()).unwrap();
        let (cells, merged) = hand_tally(&m);
        assert_eq!(line["cells"], cells);
        assert_eq!(line["merged_cells"], merged);
        assert!(line["token_ratio"].as_f64().unwrap() > 0.0);
        *cell_hist.entry(format!("{cells:04}")).or_default() += 1;
    }
    let summary = &lines[5]["summary"];
    assert_eq!(summary["records"], 5);
    assert_eq!(summary["cells"], serde_json::to_value(&cell_hist).unwrap());
}

#[test]
fn stats_empty_dataset() {
    let dir = tempdir().unwrap();
    assert_eq!(code(&tabforge(&["stats", "--dataset", path(dir.path())])), 1);
    std::fs::write(dir.path().join("records.jsonl"), "").unwrap();
    assert_eq!(code(&tabforge(&["stats", "--dataset", path(dir.path())])), 1);
    assert_eq!(code(&tabforge(&["stats", "--dataset", "/nonexistent/dataset"])), 3);
}

#[test]
fn help_lists_every_command() {
    let o = tabforge(&["--help"]);
    assert_eq!(code(&o), 0);
    for cmd in ["validate", "convert", "score", "synthesize", "instruct", "audit", "stats"] {
        assert!(stdout(&o).contains(cmd));
    }
    let o = tabforge(&["synthesize", "--help"]);
    for flag in ["--config", "--corpus", "--count", "--out", "--offline", "--seed", "--threads"] {
        assert!(stdout(&o).contains(flag), "{flag}");
    }
}
