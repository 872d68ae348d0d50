//! Run a small two-repetition experiment into a directory and analyse it,
//! the library equivalent of `evolearn evolve` followed by `evolearn analyze`.
//!
//! ```text
//! cargo run --release --example experiment -- [out-dir]
//! ```

use std::path::PathBuf;

use evolearn::analyze::cmd_analyze;
use evolearn::experiment::{cmd_evolve, ExperimentConfig};

fn main() -> evolearn::Result<()> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("evolearn-example"));
    let config = ExperimentConfig::from_toml(include_str!("small.toml"))?;
    let config = ExperimentConfig {
        out: out.clone(),
        ..config
    };
    let summary = cmd_evolve(&config)?;
    for run in &summary.runs {
        println!("{run:?}");
    }
    let report = cmd_analyze(&out, 10)?;
    println!("analysed {} robots in {} runs; wrote:", report.individuals, report.runs);
    for f in &report.files {
        println!("  {}", out.join("analysis").join(f).display());
    }
    Ok(())
}
