use super::{emit_line, finish, output, CorpusArgs};
use crate::exit::{CmdResult, Failure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;
use tabforge_core::synth::derive_seed;
use tabforge_core::sample_triplet;

#[derive(Debug, clap::Args)]
pub struct Args {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Number of triplets to sample.
    #[arg(long)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Triplet `i` draws its source table and instruction from its own stream
/// seeded by `(seed, i)`.
pub fn run(args: Args) -> CmdResult {
    let corpus = args.corpus.load(false)?;
    let records = corpus.records();
    let mut out = output(args.out.as_deref())?;
    let mut failures = 0;
    for i in 0..args.count {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(args.seed, i as u64));
        let rec = &records[rng.random_range(0..records.len())];
        match sample_triplet(&rec.structure, &rec.id, &mut rng) {
            Ok(t) => emit_line(&mut out, &t)?,
            Err(e) => {
                eprintln!("triplet {i} from {}: {e}", rec.id);
                failures += 1;
            }
        }
    }
    finish(out)?;
    eprintln!("sampled {} triplet(s) from {} table(s)", args.count - failures, records.len());
    if failures > 0 {
        return Err(Failure::Findings(format!("{failures} triplet(s) could not be sampled")));
    }
    Ok(())
}
