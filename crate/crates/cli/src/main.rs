//! `aor`: generate tracks, train, evaluate and export policies.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use aor_core::agent::Policy;
use config::RunConfig;

#[derive(Debug, Parser)]
#[command(name = "aor", version, about = "Active object recognition experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a synthetic track file to --out.
    GenData(Common),
    /// Train one model and write checkpoints, log and config echo to --out.
    Train(Common),
    /// Evaluate checkpoints (or the six-variant grid) on the test split.
    Eval {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        eval: EvalFlags,
    },
    /// Action transition statistics for the train and test splits.
    ExportPolicy {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        eval: EvalFlags,
    },
}

#[derive(Debug, Args)]
struct Common {
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Run seed (generator seed for gen-data).
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (output file for gen-data).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads for evaluation.
    #[arg(long)]
    threads: Option<usize>,
    /// Track file to use instead of synthetic data.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Override a config value, e.g. `--set train.num_iterations=10`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Debug, Args)]
struct EvalFlags {
    /// Directory written by `aor train`; repeat for several seeds.
    #[arg(long = "checkpoint")]
    checkpoints: Vec<PathBuf>,
    #[arg(long, value_enum)]
    policy: Option<PolicyArg>,
    /// Train and evaluate NB/DR/DN under both policies.
    #[arg(long)]
    grid: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PolicyArg {
    Learned,
    Random,
}

impl Common {
    fn resolve(&self, gen_data: bool) -> anyhow::Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        for o in &self.overrides {
            cfg.set(o)?;
        }
        if let Some(seed) = self.seed {
            if gen_data {
                cfg.data.seed = seed;
            } else {
                cfg.seed = seed;
            }
        }
        if let Some(out) = &self.out {
            cfg.out = out.clone();
        }
        if let Some(t) = self.threads {
            cfg.threads = t;
        }
        if let Some(d) = &self.data {
            cfg.data.path = d.clone();
        }
        Ok(cfg)
    }
}

impl EvalFlags {
    fn apply(&self, cfg: &mut RunConfig) {
        if !self.checkpoints.is_empty() {
            cfg.eval.checkpoints = self.checkpoints.clone();
        }
        if let Some(p) = self.policy {
            cfg.eval.policy = match p {
                PolicyArg::Learned => Policy::Learned,
                PolicyArg::Random => Policy::Random,
            };
        }
        cfg.eval.grid |= self.grid;
    }
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::GenData(common) => commands::gen_data(&common.resolve(true)?),
        Command::Train(common) => commands::train(&common.resolve(false)?),
        Command::Eval { common, eval } => {
            let mut cfg = common.resolve(false)?;
            eval.apply(&mut cfg);
            commands::eval(&cfg)
        }
        Command::ExportPolicy { common, eval } => {
            let mut cfg = common.resolve(false)?;
            eval.apply(&mut cfg);
            commands::export_policy(&cfg)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
