#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tabforge_core::tablecore::random::{random_contents, random_structure, SpanProfile};
use tabforge_core::{structure_to_html, EmitMode};

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn tabforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tabforge"))
        .args(args)
        .env_remove("TABFORGE_LLM_ENDPOINT")
        .env_remove("TABFORGE_LLM_MODEL")
        .env_remove("TABFORGE_LLM_API_KEY")
        .output()
        .expect("binary runs")
}

pub fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

pub fn json_lines(o: &Output) -> Vec<serde_json::Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

/// A directory of `n` random HTML tables, 20 to 24 rows and columns each,
/// large enough to supply any block of the default synthesis grid.
pub fn write_html_corpus(dir: &Path, n: usize, seed: u64) {
    std::fs::create_dir_all(dir).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in 0..n {
        let rows = 20 + (i % 5);
        let cols = 24 - (i % 5);
        let s = random_contents(&random_structure(rows, cols, SpanProfile::default(), &mut rng), 0.2, &mut rng);
        let html = structure_to_html(&s, EmitMode::WithContent).unwrap();
        std::fs::write(dir.join(format!("src-{i:03}.html")), html).unwrap();
    }
}

/// Relative path to file bytes for every file under `root`.
pub fn snapshot(root: &Path) -> BTreeMap<String, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, out: &mut BTreeMap<String, Vec<u8>>) {
        for e in std::fs::read_dir(dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                walk(root, &p, out);
            } else {
                let rel = p.strip_prefix(root).unwrap().to_string_lossy().into_owned();
                out.insert(rel, std::fs::read(&p).unwrap());
            }
        }
    }
    let mut out = BTreeMap::new();
    walk(root, root, &mut out);
    out
}
