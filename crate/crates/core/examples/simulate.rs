//! Simulate a random robot towards each target direction and report the
//! fitness components.
//!
//! ```text
//! cargo run --release --example simulate -- [seed]
//! ```

use std::time::Instant;

use evolearn::experiment::random_individual;
use evolearn::fitness::{fitness, fitness_components, TARGET_DIRECTIONS};
use evolearn::{simulate, SimConfig};

fn main() -> evolearn::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok());
    let robot = match seed {
        Some(s) => random_individual(s),
        None => (0..)
            .map(random_individual)
            .find(|r| r.morphology.joints().len() >= 3)
            .unwrap(),
    };
    println!("{}", robot.morphology.render_ascii());
    println!(
        "{} joints, {} weights",
        robot.morphology.joints().len(),
        robot.inherited.len()
    );
    let cfg = SimConfig::default();
    for target in TARGET_DIRECTIONS {
        let start = Instant::now();
        let tr = simulate(&robot.morphology, &robot.inherited, target, &cfg)?;
        let c = fitness_components(&tr, target);
        let (x, y) = tr.end();
        println!(
            "target {:>3.0} deg: end ({x:+.3}, {y:+.3}) path {:.3} beta {:+.3} theta {:.3} fitness {:.4} [{:?}]",
            target.to_degrees(),
            tr.path_length,
            c.beta,
            c.theta,
            fitness(&c),
            start.elapsed()
        );
    }
    Ok(())
}
