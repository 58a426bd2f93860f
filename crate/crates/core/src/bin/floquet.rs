//! Command-line front end: `floquet <evolve|fig2|holonomy|wcheck|echo> --config <path>`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use floquet_holonomy::cli::{
    cmd_evolve, cmd_fig2, cmd_holonomy, cmd_wcheck, default_wcheck_config, CliError, CliResult, Experiment,
    ExperimentConfig, Overrides,
};

#[derive(Parser)]
#[command(version, about = "Driven-spin dynamics and loop holonomies")]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// Experiment configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Steps per drive period for exact propagation.
    #[arg(long, global = true)]
    steps: Option<usize>,
    /// Seed for random draws.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Drive phase offset in radians.
    #[arg(long, global = true, allow_negative_numbers = true)]
    theta: Option<f64>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Time series of the exact evolution.
    Evolve,
    /// Loop measurement sweep against the closed form.
    Fig2,
    /// Loop unitaries and commutator norms.
    Holonomy,
    /// W oracle triangle on random draws.
    Wcheck,
    /// Re-emit the normalized config.
    Echo,
}

fn load(path: &Path) -> CliResult<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    ExperimentConfig::parse(&text)
}

fn run(args: &Args) -> CliResult<()> {
    let config = match (&args.config, args.command) {
        (Some(p), _) => load(p)?,
        (None, Command::Wcheck) => default_wcheck_config(),
        (None, _) => {
            return Err(CliError::Config {
                line: None,
                message: "--config is required".into(),
            })
        }
    };
    let base = args
        .config
        .as_deref()
        .and_then(Path::parent)
        .unwrap_or(Path::new("."))
        .to_path_buf();
    let out_path = args.out.clone().or_else(|| config.output.path.as_ref().map(|p| base.join(p)));
    let overrides = Overrides {
        steps: args.steps,
        theta: args.theta,
        seed: Some(args.seed),
    };
    let exp = Experiment::new(config, &base, &overrides)?;
    let text = match args.command {
        Command::Evolve => cmd_evolve(&exp)?,
        Command::Fig2 => cmd_fig2(&exp)?,
        Command::Holonomy => {
            let (csv, warnings) = cmd_holonomy(&exp)?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            csv
        }
        Command::Wcheck => cmd_wcheck(&exp, args.seed)?,
        Command::Echo => exp.config.to_toml(),
    };
    match out_path {
        Some(p) => std::fs::write(&p, text).map_err(|e| CliError::io(&p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
