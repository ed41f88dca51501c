//! `arithq`: build arithmetic quandle towers, verify them, and run the
//! reconstruction experiments.

mod config;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use config::ExperimentConfig;
use run::{run, write_report, Context, Failure};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Command {
    Build,
    Verify,
    Reconstruct,
    Aut,
    Match,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Build => "build",
            Command::Verify => "verify",
            Command::Reconstruct => "reconstruct",
            Command::Aut => "aut",
            Command::Match => "match",
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "arithq",
    version,
    about = "Quandles of abelian covers of arithmetic curves"
)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Seed for shuffling and sampling; overrides the config's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Report directory; overrides the config's output.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let fail_input = |msg: String| {
        eprintln!("error: {msg}");
        ExitCode::from(2)
    };
    let text = match std::fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => return fail_input(format!("{}: {e}", cli.config.display())),
    };
    let config = match ExperimentConfig::from_json(&text) {
        Ok(c) => c,
        Err(e) => return fail_input(e.to_string()),
    };
    let raw = serde_json::from_str(&text).expect("validated above");
    let seed = cli.seed.or(config.seed).unwrap_or(0);
    let out = cli
        .out
        .clone()
        .or_else(|| config.output.clone().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    let ctx = Context { config, raw, seed };
    match run(cli.command.name(), &ctx) {
        Ok(outcome) => {
            let path = match write_report(&out, cli.command.name(), &outcome.report) {
                Ok(p) => p,
                Err(e) => return fail_input(format!("{}: {e}", out.display())),
            };
            println!(
                "{}: {} ({})",
                cli.command.name(),
                outcome.summary,
                path.display()
            );
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(e)) => fail_input(e.to_string()),
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
