//! Evaluate the directed-locomotion fitness on a few hand-made paths.
//!
//! ```text
//! cargo run --example fitness
//! ```

use evolearn::fitness::{fitness, raw_fitness, FitnessComponents};

fn main() {
    // (name, beta, alpha, theta, path length)
    let cases = [
        ("straight on target", 1.0, 0.0, 0.0, 1.0),
        ("curved on target", 1.0, 0.0, 0.0, 2.0),
        ("drifting", 0.8, 0.6, 0.6435, 1.2),
        ("sideways", 0.0, 1.0, std::f64::consts::FRAC_PI_2, 1.0),
        ("backwards", -1.0, 0.0, std::f64::consts::PI, 1.0),
        ("standing still", 0.0, 0.0, 0.0, 0.0),
    ];
    println!("{:<20} {:>9} {:>9}", "path", "raw", "fitness");
    for (name, beta, alpha, theta, length) in cases {
        let c = FitnessComponents::new(beta, alpha, theta, length);
        println!("{name:<20} {:>9.4} {:>9.4}", raw_fitness(&c), fitness(&c));
    }
}
