mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::Failure;

#[derive(Parser)]
#[command(name = "relseq", version, about = "Learn, apply and score grammatical-relation rule sequences")]
struct Cli {
    /// Worker threads for rule scoring and application (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Learn a rule sequence from an annotated corpus.
    Train(TrainArgs),
    /// Run a rule sequence over a corpus, replacing each sentence's initial labeling.
    Apply(ApplyArgs),
    /// Score predicted relations (the `initial` field) against gold.
    Eval(EvalArgs),
    /// Print a rule file or corpus statistics and diagnostics.
    Inspect(InspectArgs),
}

#[derive(Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// Directory of lexicon files; missing resources are treated as empty.
    #[arg(long)]
    pub lexicons: Option<PathBuf>,
    /// Flat key=value training configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Rule file to write; the log and manifest go next to it.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub threshold: Option<i64>,
    #[arg(long)]
    pub max_distance: Option<usize>,
    #[arg(long)]
    pub max_conditions: Option<usize>,
}

#[derive(Args)]
pub struct ApplyArgs {
    #[arg(long)]
    pub rules: PathBuf,
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub lexicons: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct EvalArgs {
    /// Corpus whose `initial` relations are the response.
    pub predicted: PathBuf,
    /// Corpus whose `gold` relations are the key.
    pub gold: PathBuf,
    /// Score generic, locational and temporal modifiers as one class.
    #[arg(long)]
    pub merge_mod: bool,
    /// Also fold location objects and preposition-mediated arguments into it.
    #[arg(long)]
    pub merge_combined: bool,
}

#[derive(Args)]
pub struct InspectArgs {
    #[arg(long)]
    pub rules: Option<PathBuf>,
    #[arg(long)]
    pub corpus: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.jobs {
        if n == 0 {
            return Err(Failure::validation(anyhow::anyhow!("--jobs must be at least 1")));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| Failure::io(anyhow::anyhow!("cannot start worker threads: {}", e)))?;
    pool.install(|| match cli.command {
        Command::Train(a) => commands::train(&a),
        Command::Apply(a) => commands::apply(&a),
        Command::Eval(a) => commands::eval(&a),
        Command::Inspect(a) => commands::inspect(&a),
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("RELSEQ_LOG", "warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
