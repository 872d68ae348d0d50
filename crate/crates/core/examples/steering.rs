//! Tabulate the steering gain and compare a robot's path with and without
//! steering towards a target behind it.
//!
//! ```text
//! cargo run --release --example steering
//! ```

use std::f64::consts::PI;

use evolearn::cpg::{steering_gain, Side};
use evolearn::experiment::random_individual;
use evolearn::{simulate, SimConfig};

fn main() -> evolearn::Result<()> {
    println!("theta    gain");
    for k in 0..=8 {
        let theta = k as f64 * PI / 8.0;
        println!("{theta:5.3}  {:.5}", steering_gain(theta, 7));
    }

    let target = PI / 2.0;
    let free = SimConfig {
        steering_exponent: 0,
        ..SimConfig::default()
    };
    let robot = (0..5_000)
        .map(random_individual)
        .filter(|r| {
            r.morphology
                .joints()
                .iter()
                .any(|&j| Side::of(r.morphology.modules[j].position) == Side::Right)
        })
        .find(|r| simulate(&r.morphology, &r.inherited, target, &free).is_ok_and(|tr| tr.path_length > 1.0))
        .expect("a moving robot among the first 5000 seeds");
    for exponent in [0, 7] {
        let cfg = SimConfig {
            steering_exponent: exponent,
            ..SimConfig::default()
        };
        let tr = simulate(&robot.morphology, &robot.inherited, target, &cfg)?;
        let (x, y) = tr.end();
        println!("exponent {exponent}: end ({x:+.3}, {y:+.3}) path {:.3}", tr.path_length);
    }
    Ok(())
}
