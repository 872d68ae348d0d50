//! Integrate the CPG network of a random robot and print the joint outputs
//! over time, followed by the state energy.
//!
//! ```text
//! cargo run --example cpg_oscillator -- [seed]
//! ```

use evolearn::cpg::build_cpg;
use evolearn::experiment::random_individual;

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok());
    let robot = match seed {
        Some(s) => random_individual(s),
        None => (0..)
            .map(random_individual)
            .find(|r| r.morphology.joints().len() >= 2)
            .unwrap(),
    };
    let mut net = build_cpg(&robot.morphology, &robot.brain);
    let n = net.joint_count();
    println!("{n} joints: {:?}", net.layout().ordering());
    if n == 0 {
        return;
    }
    let dt = 0.005;
    for step in 0..=2000 {
        if step % 100 == 0 {
            let outs: Vec<String> = (0..n).map(|i| format!("{:+.3}", net.output(i))).collect();
            println!(
                "t {:>5.2}  {}  energy {:.4}",
                step as f64 * dt,
                outs.join(" "),
                net.energy()
            );
        }
        net.step(dt);
    }
}
