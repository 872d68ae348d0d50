//! Run the surrogate-assisted differential evolution learner on the brain
//! of a random robot and print its trace.
//!
//! ```text
//! cargo run --release --example revde_learning -- [seed]
//! ```

use evolearn::evolution::evaluate_brain;
use evolearn::experiment::random_individual;
use evolearn::rng::{stream, Purpose};
use evolearn::{learn, LearnerParams, SimConfig};

fn main() -> evolearn::Result<()> {
    let seed: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let sim = SimConfig::default();
    let robot = (seed..)
        .map(random_individual)
        .find(|r| !r.inherited.is_empty() && evaluate_brain(r.id, &r.morphology, &r.inherited, &sim).fitness > 0.0)
        .unwrap();
    let params = LearnerParams::default();
    println!(
        "{} joints, {} weights, budget {}",
        robot.morphology.joints().len(),
        robot.inherited.len(),
        params.budget()
    );
    let evaluate = |w: &_| evaluate_brain(robot.id, &robot.morphology, w, &sim).fitness;
    let out = learn(
        &robot.inherited,
        &params,
        evaluate,
        &mut stream(seed, Purpose::Learner, 0, 0),
    )?;
    println!("iteration  best      prediction_error  evaluations");
    for row in &out.trace {
        println!(
            "{:>9}  {:.5}  {:>16.5}  {:>11}",
            row.iteration, row.best_fitness, row.prediction_error, row.evaluations
        );
    }
    println!(
        "inherited {:.5} -> learned {:.5} (delta {:+.5})",
        out.inherited_fitness, out.best_fitness, out.delta
    );
    Ok(())
}
