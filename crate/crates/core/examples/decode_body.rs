//! Decode random body genomes and print each robot with its descriptors.
//!
//! ```text
//! cargo run --example decode_body -- [count] [seed]
//! ```

use evolearn::cppn::{CppnGenome, BODY_INPUTS, BODY_OUTPUTS};
use evolearn::{compute_descriptors, decode_body};

fn main() {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<u64>().ok());
    let count = args.next().flatten().unwrap_or(4);
    let seed = args.next().flatten().unwrap_or(0);
    for s in seed..seed + count {
        let body = decode_body(&CppnGenome::random_from_seed(BODY_INPUTS, BODY_OUTPUTS, s));
        let d = compute_descriptors(&body);
        println!(
            "genome seed {s}: {} modules, {} joints",
            body.len(),
            body.joints().len()
        );
        println!("{}", body.render_ascii());
        println!(
            "proportion {:.3}  bricks {}  rel_limbs {:.3}  symmetry {:.3}  branching {:.3}\n",
            d.proportion, d.num_bricks, d.rel_limbs, d.symmetry, d.branching
        );
    }
}
