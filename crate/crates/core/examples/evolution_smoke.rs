//! A short evolution run in memory, printing per-generation statistics.
//!
//! ```text
//! cargo run --release --example evolution_smoke -- [evolution-only|learning]
//! ```

use evolearn::evolution::evaluation_budget;
use evolearn::{run_evolution, EvoParams, LearnerParams, Mode};

fn main() -> evolearn::Result<()> {
    let mode: Mode = std::env::args().nth(1).as_deref().unwrap_or("evolution-only").parse()?;
    let params = EvoParams {
        population: 20,
        offspring: 10,
        generations: 8,
        mode,
        learner: LearnerParams {
            population: 6,
            iterations: 3,
            ..LearnerParams::default()
        },
        seed: 11,
        ..EvoParams::default()
    };
    let (counted, quoted) = evaluation_budget(&params);
    println!("mode {mode}: at most {counted} simulations ({quoted} by the offspring-founder formula)");
    let run = run_evolution(params)?;
    println!("gen  mean_fit  max_fit   delta    size  limbs  robots  sims");
    for s in &run.stats {
        println!(
            "{:>3}  {:>8.4}  {:>7.4}  {:>6.3}  {:>5.2}  {:>5.2}  {:>6}  {:>5}",
            s.generation,
            s.mean_fitness,
            s.max_fitness,
            s.mean_delta,
            s.mean_size,
            s.mean_rel_limbs,
            s.robots,
            s.evaluations
        );
    }
    Ok(())
}
