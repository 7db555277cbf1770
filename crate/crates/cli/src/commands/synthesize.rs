use super::{emit_line, finish, output, read_text, CorpusArgs};
use crate::exit::{io_failure, CmdResult, Failure};
use crate::transport::HttpTransport;
use std::path::PathBuf;
use tabforge_core::synth::client::{ClientConfig, LlmContentGenerator, LlmTableValidator, ENV_ENDPOINT};
use tabforge_core::synth::dataset::write_dataset;
use tabforge_core::synth::{deterministic_filler, structural_validator, ContentMode};
use tabforge_core::{synthesize_batch, SynthConfig, SynthError};

#[derive(Debug, clap::Args)]
pub struct Args {
    /// TOML file with synthesis settings; defaults apply to missing keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Number of tables to generate.
    #[arg(long)]
    pub count: usize,
    /// Output directory; must be absent or empty.
    #[arg(long)]
    pub out: PathBuf,
    /// Use the built-in filler and validator even when the config asks for
    /// the external service.
    #[arg(long)]
    pub offline: bool,
    /// Overrides the seed from the config.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; 1 runs serially. Output does not depend on this.
    #[arg(long)]
    pub threads: Option<usize>,
}

fn load_config(args: &Args) -> Result<SynthConfig, Failure> {
    let mut cfg = match &args.config {
        Some(p) => SynthConfig::from_toml_str(&read_text(p)?).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
        None => SynthConfig::default(),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn check_out_dir(args: &Args) -> Result<(), Failure> {
    let occupied = std::fs::read_dir(&args.out).is_ok_and(|mut entries| entries.next().is_some());
    if occupied {
        return Err(Failure::Usage(format!("output directory {} is not empty", args.out.display())));
    }
    Ok(())
}

fn exit_for(results: &[Result<tabforge_core::SynthRecord, SynthError>]) -> CmdResult {
    let client = results.iter().filter(|r| matches!(r, Err(SynthError::Client { .. }))).count();
    let failed = results.iter().filter(|r| r.is_err()).count();
    if client > 0 {
        return Err(Failure::External(format!("{client} record(s) failed in the external client")));
    }
    if failed > 0 {
        return Err(Failure::Findings(format!("{failed} record(s) could not be synthesized")));
    }
    Ok(())
}

pub fn run(args: Args) -> CmdResult {
    if args.count == 0 {
        return Err(Failure::Usage("--count must be positive".into()));
    }
    if args.threads == Some(0) {
        return Err(Failure::Usage("--threads must be positive".into()));
    }
    let cfg = load_config(&args)?;
    check_out_dir(&args)?;
    let corpus = args.corpus.load(false)?;

    let external = cfg.content_mode == ContentMode::External && !args.offline;
    let results = if external {
        let client = ClientConfig::from_env()
            .map_err(|e| Failure::External(e.to_string()))?
            .ok_or_else(|| Failure::External(format!("content_mode = \"external\" needs {ENV_ENDPOINT}; pass --offline to use the built-in filler")))?;
        eprintln!("using external generator and validator at {}", client.endpoint);
        let generator = LlmContentGenerator {
            transport: HttpTransport::new(client.endpoint.clone(), client.api_key.clone()),
            model: client.model.clone(),
        };
        let validator = LlmTableValidator {
            transport: HttpTransport::new(client.endpoint, client.api_key),
            model: client.model,
        };
        synthesize_batch(&cfg, &corpus, &generator, &validator, args.count, args.threads)
    } else {
        synthesize_batch(
            &cfg,
            &corpus,
            &deterministic_filler(cfg.empty_fraction),
            &structural_validator(),
            args.count,
            args.threads,
        )
    }
    .map_err(|e| Failure::Usage(e.to_string()))?;

    let summary = write_dataset(&args.out, &results).map_err(|e| Failure::External(e.to_string()))?;
    let cfg_path = args.out.join("config.toml");
    std::fs::write(&cfg_path, cfg.to_toml_string()).map_err(|e| io_failure(&cfg_path, e))?;

    for (i, r) in results.iter().enumerate() {
        if let Err(e) = r {
            eprintln!("record {i}: {e}");
        }
    }
    eprintln!(
        "requested={} written={} accepted={} rejected={} failed={} attempts={}",
        summary.requested, summary.written, summary.accepted, summary.rejected, summary.failed, summary.attempts
    );
    let mut out = output(None)?;
    emit_line(&mut out, &summary)?;
    finish(out)?;
    exit_for(&results)
}
