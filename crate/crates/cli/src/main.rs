//! `tabforge`: batch tools for table structure matrices.
//!
//! Machine output is JSONL on stdout; human-readable output goes to stderr.
//! Exit codes: 0 success, 1 validation or scoring failures present, 2 usage
//! error, 3 I/O or external-client error.

mod commands;
mod exit;
mod transport;

use clap::{Parser, Subcommand};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "tabforge", version, about = "Table structure matrices: validate, convert, score, synthesize")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check matrix or HTML files for well-formedness and implicit lines.
    Validate(commands::validate::Args),
    /// Convert between the matrix text form and HTML.
    Convert(commands::convert::Args),
    /// Score predictions against ground truth with TEDS and S-TEDS.
    Score(commands::score::Args),
    /// Generate a synthetic dataset by mixing and expanding corpus tables.
    Synthesize(commands::synthesize::Args),
    /// Sample instruction/target training triplets from a corpus.
    Instruct(commands::instruct::Args),
    /// Count implicit rows and columns across a corpus.
    Audit(commands::audit::Args),
    /// Report distribution statistics for a synthesized dataset.
    Stats(commands::stats::Args),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate(a) => commands::validate::run(a),
        Command::Convert(a) => commands::convert::run(a),
        Command::Score(a) => commands::score::run(a),
        Command::Synthesize(a) => commands::synthesize::run(a),
        Command::Instruct(a) => commands::instruct::run(a),
        Command::Audit(a) => commands::audit::run(a),
        Command::Stats(a) => commands::stats::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
