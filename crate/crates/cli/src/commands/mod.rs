pub mod audit;
pub mod convert;
pub mod instruct;
pub mod score;
pub mod stats;
pub mod synthesize;
pub mod validate;

use crate::exit::{io_failure, Failure};
use clap::ValueEnum;
use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};
use tabforge_core::{load_annotations, Corpus, CorpusFormat, LoadOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TableFormat {
    Matrix,
    Html,
}

impl TableFormat {
    /// `.html`/`.htm` are HTML; `.txt`, `.matrix` and `.otsl` are matrices.
    pub fn from_extension(path: &Path) -> Option<TableFormat> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "html" | "htm" => Some(TableFormat::Html),
            "txt" | "matrix" | "otsl" => Some(TableFormat::Matrix),
            _ => None,
        }
    }

    pub fn resolve(explicit: Option<TableFormat>, path: &Path) -> Result<TableFormat, Failure> {
        explicit.or_else(|| TableFormat::from_extension(path)).ok_or_else(|| {
            Failure::Usage(format!("cannot infer the format of {}; pass --format", path.display()))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CorpusKind {
    /// One JSON annotation per line with structure tokens and cells.
    Jsonl,
    /// A directory of `.html` files, one table each.
    HtmlDir,
}

#[derive(Debug, clap::Args)]
pub struct CorpusArgs {
    /// Annotation file (JSONL) or directory of HTML tables.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Corpus layout; detected from the path when omitted.
    #[arg(long)]
    pub corpus_format: Option<CorpusKind>,
}

impl CorpusArgs {
    pub fn load(&self, repair: bool) -> Result<Corpus, Failure> {
        let format = match self.corpus_format {
            Some(CorpusKind::Jsonl) => CorpusFormat::PubtabnetJsonl,
            Some(CorpusKind::HtmlDir) => CorpusFormat::HtmlDir,
            None => CorpusFormat::detect(&self.corpus),
        };
        let corpus = load_annotations(&self.corpus, format, LoadOptions { repair })
            .map_err(|e| Failure::External(e.to_string()))?;
        if !corpus.skipped().is_empty() {
            eprintln!("skipped {} malformed corpus record(s)", corpus.skipped().len());
            for s in corpus.skipped().iter().take(5) {
                eprintln!("  {}: {}", s.location, s.reason);
            }
        }
        Ok(corpus)
    }
}

pub fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

/// Stdout, or a file when `out` is given.
pub fn output(out: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p).map_err(|e| io_failure(p, e))?)),
        None => Box::new(std::io::BufWriter::new(std::io::stdout().lock())),
    })
}

pub fn emit_line(w: &mut dyn Write, value: &impl Serialize) -> Result<(), Failure> {
    let line = serde_json::to_string(value).map_err(|e| Failure::External(e.to_string()))?;
    writeln!(w, "{line}").map_err(|e| Failure::External(format!("write failed: {e}")))
}

pub fn finish(mut w: Box<dyn Write>) -> Result<(), Failure> {
    w.flush().map_err(|e| Failure::External(format!("write failed: {e}")))
}
