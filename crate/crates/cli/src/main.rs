use clap::Parser;
use irsnet_cli::{run, Config, ExperimentName, Overrides, RunError};
use std::path::PathBuf;
use std::process::ExitCode;

/// Run an irsnet experiment and write its CSV table and SVG plot.
#[derive(Parser, Debug)]
#[command(name = "irsnet", version)]
struct Cli {
    /// JSON config; built-in desk-scale defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    threads: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    experiment: Option<ExperimentName>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    let mut cfg = match &cli.config {
        Some(path) => match Config::load(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
        None => Config::default_for(cli.experiment.unwrap_or(ExperimentName::Fig3Powers)),
    };
    cfg.apply(&Overrides { seed: cli.seed, trials: cli.trials, threads: cli.threads, out: cli.out, experiment: cli.experiment });

    match run(&cfg) {
        Ok(a) => {
            for c in &a.checks {
                println!("{c}");
            }
            println!("{}", a.csv.display());
            if let Some(svg) = &a.svg {
                println!("{}", svg.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let RunError::ValidationFailed(_) = &e {
                // the report was written; show it before the summary line
                let csv = cfg.experiment.out_dir.join("validate_all.csv");
                if let Ok(s) = std::fs::read_to_string(&csv) {
                    eprint!("{s}");
                }
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
