use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use evolearn::analyze::{cmd_analyze, DEFAULT_RESOLUTION};
use evolearn::experiment::{cmd_evolve, cmd_learn, thread_pool, ExperimentConfig, LearnRequest, Overrides};

#[derive(Parser)]
#[command(version, about = "Evolve modular robots, with or without infant learning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run repeated evolutionary experiments
    Evolve {
        /// TOML experiment configuration
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run the lifetime learner once on a saved body and brain
    Learn {
        /// Morphology JSON (e.g. best_body.json of a run)
        #[arg(long)]
        body: PathBuf,
        /// Brain weights JSON (e.g. best_brain.json of a run)
        #[arg(long)]
        brain: PathBuf,
        /// Learner and simulator settings are read from this config
        #[arg(long)]
        config: Option<PathBuf>,
        /// Write the per-iteration trace CSV here
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Use a constant-zero evaluator instead of the simulator
        #[arg(long)]
        flat_fitness: bool,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Summarize a finished experiment or run directory
    Analyze {
        dir: PathBuf,
        /// Bins per axis of landscape and density grids
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        resolution: usize,
    },
}

fn config(path: Option<&PathBuf>, overrides: &Overrides) -> evolearn::Result<ExperimentConfig> {
    let mut cfg = match path {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    cfg.apply(overrides);
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: Cli) -> evolearn::Result<()> {
    match cli.command {
        Command::Evolve {
            config: path,
            overrides,
        } => {
            let cfg = config(path.as_ref(), &overrides)?;
            let summary = cmd_evolve(&cfg)?;
            for r in &summary.runs {
                println!(
                    "run {:02} seed {}: final mean {:.4} max {:.4} delta {:.4}",
                    r.run, r.seed, r.final_mean_fitness, r.final_max_fitness, r.final_mean_delta
                );
            }
            println!("summary: {}", cfg.out.join("summary.json").display());
        }
        Command::Learn {
            body,
            brain,
            config: path,
            trace,
            flat_fitness,
            overrides,
        } => {
            let cfg = config(path.as_ref(), &overrides)?;
            let req = LearnRequest {
                body,
                brain,
                learner: cfg.learner,
                sim: cfg.sim,
                seed: cfg.seed,
                flat_fitness,
                trace,
            };
            let report = thread_pool(cfg.threads)?.install(|| cmd_learn(&req))?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::Analyze { dir, resolution } => {
            let report = cmd_analyze(&dir, resolution)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
