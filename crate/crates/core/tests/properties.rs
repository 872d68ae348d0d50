//! Invariants checked over random inputs.

use std::f64::consts::PI;

use proptest::prelude::*;
use rand::Rng as _;

use evolearn::analyze::{landscape, Descriptor};
use evolearn::cpg::{apply_steering, build_cpg, steering_gain, BrainWeights, Side};
use evolearn::cppn::{
    crossover, mutate, CppnGenome, Fitter, InnovationTracker, MutationRates, BODY_INPUTS, BODY_OUTPUTS, BRAIN_INPUTS,
    BRAIN_OUTPUTS,
};
use evolearn::evolution::{select_parents, select_survivors, Individual, IndividualRecord};
use evolearn::experiment::random_individual;
use evolearn::fitness::{fitness_components, TARGET_DIRECTIONS};
use evolearn::learner::{knn_predict, learn, Archive, LearnerParams};
use evolearn::morphology::{compute_descriptors, decode_body, Morphology};
use evolearn::rng::seeded;
use evolearn::sim::{simulate, SimConfig};

const VARIATION_APPLICATIONS: usize = 10_000;

#[test]
fn variation_preserves_genome_validity() {
    let mut rng = seeded(17);
    let rates = MutationRates::with_probability(0.8);
    for (inputs, outputs) in [(BODY_INPUTS, BODY_OUTPUTS), (BRAIN_INPUTS, BRAIN_OUTPUTS)] {
        let mut tracker = InnovationTracker::new(inputs, outputs);
        let mut pool: Vec<CppnGenome> = (0..20).map(|_| CppnGenome::random(inputs, outputs, &mut rng)).collect();
        for step in 0..VARIATION_APPLICATIONS / 2 {
            let a = rng.random_range(0..pool.len());
            let child = if step % 2 == 0 {
                mutate(&pool[a], &mut rng, &rates, &mut tracker)
            } else {
                let b = rng.random_range(0..pool.len());
                let fitter = if rng.random_bool(0.5) { Fitter::A } else { Fitter::B };
                crossover(&pool[a], &pool[b], fitter, 0.8, &mut rng).unwrap()
            };
            child.validate().unwrap();
            assert_eq!(child.shape(), (inputs, outputs));
            let slot = rng.random_range(0..pool.len());
            pool[slot] = child;
        }
    }
}

#[test]
fn selection_is_uniform_over_equal_fitness() {
    // chi-squared, 99 degrees of freedom, 0.999 quantile
    const CRITICAL: f64 = 148.23;
    let pop: Vec<Individual> = (0..100).map(random_individual).collect();
    let pairs = select_parents(&pop, 5_000, 2, &mut seeded(8));
    let mut counts = vec![0usize; pop.len()];
    for (a, b) in pairs {
        counts[a] += 1;
        counts[b] += 1;
    }
    let expected = 10_000.0 / 100.0;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    assert!(chi2 < CRITICAL, "chi2 = {chi2}");
}

#[test]
fn survivors_keep_size_and_best_parent() {
    let mut rng = seeded(9);
    for _ in 0..50 {
        let mu = rng.random_range(2..20);
        let lambda = rng.random_range(1..=mu);
        let mut parents: Vec<Individual> = (0..mu as u64).map(random_individual).collect();
        for (i, p) in parents.iter_mut().enumerate() {
            p.id = i as u64;
            p.fitness_after = rng.random_range(0.0..3.0);
        }
        let mut offspring: Vec<Individual> = (0..lambda as u64).map(random_individual).collect();
        for (i, o) in offspring.iter_mut().enumerate() {
            o.id = (mu + i) as u64;
            o.fitness_after = rng.random_range(0.0..3.0);
        }
        let best = parents.iter().map(|p| p.fitness_after).fold(f64::MIN, f64::max);
        let next = select_survivors(parents, offspring, mu);
        assert_eq!(next.len(), mu);
        if lambda < mu {
            assert!(next.iter().any(|i| i.fitness_after == best));
        }
    }
}

fn transformed(body: &Morphology, f: impl Fn([i32; 3]) -> [i32; 3]) -> Morphology {
    let mut out = body.clone();
    for m in &mut out.modules {
        m.position = f(m.position);
    }
    out
}

fn record(proportion: f64, symmetry: f64, fitness: f64) -> IndividualRecord {
    let mut r = IndividualRecord::from(&random_individual(0));
    (r.proportion, r.symmetry, r.fitness_after) = (proportion, symmetry, fitness);
    r
}

fn random_robot_with_joints(seed: u64) -> Individual {
    (seed * 1000..)
        .map(random_individual)
        .find(|r| !r.inherited.is_empty())
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn cppn_eval_is_pure(seed in any::<u64>(), inputs in prop::collection::vec(-2.0f64..2.0, 4)) {
        let g = CppnGenome::random_from_seed(4, 5, seed);
        let a = g.eval(&inputs).unwrap();
        let b = g.compile().eval(&inputs).unwrap();
        prop_assert_eq!(a.len(), 5);
        prop_assert!(a.iter().zip(&b).all(|(x, y)| x.to_bits() == y.to_bits()));
    }

    #[test]
    fn decode_is_deterministic_and_valid(seed in any::<u64>()) {
        let g = CppnGenome::random_from_seed(4, 5, seed);
        let a = decode_body(&g);
        prop_assert_eq!(&a, &decode_body(&g));
        prop_assert!(a.check().is_ok());
    }

    #[test]
    fn descriptors_invariant_under_translation_and_rotation(
        seed in any::<u64>(),
        dx in -50i32..50, dy in -50i32..50, dz in -5i32..5,
    ) {
        let body = decode_body(&CppnGenome::random_from_seed(4, 5, seed));
        let d = compute_descriptors(&body);
        let moved = transformed(&body, |[x, y, z]| [x + dx, y + dy, z + dz]);
        prop_assert_eq!(compute_descriptors(&moved), d);
        let turned = compute_descriptors(&transformed(&body, |[x, y, z]| [-y, x, z]));
        prop_assert_eq!(turned.symmetry, d.symmetry);
        prop_assert_eq!(turned.proportion, d.proportion);
    }

    #[test]
    fn cpg_weights_are_skew_and_bounded(seed in 0u64..5_000) {
        let robot = random_individual(seed);
        let net = build_cpg(&robot.morphology, &robot.brain);
        let m = net.weight_matrix();
        #[allow(clippy::needless_range_loop)]
        for r in 0..m.len() {
            for c in 0..m.len() {
                prop_assert_eq!(m[r][c], -m[c][r]);
                prop_assert!(m[r][c].abs() <= 1.0);
            }
        }
    }

    #[test]
    fn landscape_matches_brute_force_rebin(
        points in prop::collection::vec((0.0f64..=1.0, 0.0f64..=1.0, 0.0f64..3.0), 0..60),
        resolution in 1usize..25,
    ) {
        let records: Vec<IndividualRecord> = points.iter().map(|&(p, s, f)| record(p, s, f)).collect();
        let grid = landscape(&records, Descriptor::Proportion, Descriptor::Symmetry, resolution);
        prop_assert_eq!(grid.len(), resolution * resolution);
        let inside = |v: f64, lo: f64, hi: f64| lo <= v && (v < hi || (hi == 1.0 && v == 1.0));
        for cell in &grid {
            let hits: Vec<f64> = points
                .iter()
                .filter(|&&(p, s, _)| inside(p, cell.a_lo, cell.a_hi) && inside(s, cell.b_lo, cell.b_hi))
                .map(|&(_, _, f)| f)
                .collect();
            prop_assert_eq!(cell.count, hits.len());
            match cell.mean_fitness {
                None => prop_assert!(hits.is_empty()),
                Some(m) => prop_assert!((m - hits.iter().sum::<f64>() / hits.len() as f64).abs() < 1e-12),
            }
        }
    }

    #[test]
    fn steering_only_attenuates(out in -10.0f64..10.0, theta in -PI..=PI, side in 0usize..3) {
        let side = [Side::Left, Side::Right, Side::Center][side];
        prop_assert!(apply_steering(out, theta, side, 7).abs() <= out.abs());
    }

    #[test]
    fn steering_gain_decreases_with_deviation(a in 0.0f64..PI, b in 0.0f64..PI) {
        prop_assume!(a < b);
        prop_assert!(steering_gain(b, 7) < steering_gain(a, 7));
        prop_assert_eq!(steering_gain(-a, 7), steering_gain(a, 7));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn simulation_is_rotationally_equivariant(seed in 0u64..200, phi in 0.0f64..(2.0 * PI)) {
        let robot = random_robot_with_joints(seed);
        let cfg = SimConfig { duration: 20.0, ..SimConfig::default() };
        let base = simulate(&robot.morphology, &robot.inherited, 0.0, &cfg).unwrap();
        let turned = simulate(&robot.morphology, &robot.inherited, phi, &cfg).unwrap();
        prop_assert!((base.path_length - turned.path_length).abs() < 1e-9);
        let (c, s) = (phi.cos(), phi.sin());
        for (a, b) in base.samples.iter().zip(&turned.samples) {
            prop_assert!((a.x * c - a.y * s - b.x).abs() < 1e-9);
            prop_assert!((a.x * s + a.y * c - b.y).abs() < 1e-9);
        }
    }

    #[test]
    fn trajectories_respect_geometry(seed in 0u64..200) {
        let robot = random_robot_with_joints(seed);
        let cfg = SimConfig { duration: 20.0, ..SimConfig::default() };
        for target in TARGET_DIRECTIONS {
            let tr = simulate(&robot.morphology, &robot.inherited, target, &cfg).unwrap();
            let (x, y) = tr.end();
            prop_assert!(tr.path_length + 1e-12 >= x.hypot(y));
            for w in tr.samples.windows(2) {
                prop_assert!(w[1].t > w[0].t);
                let step = (w[1].x - w[0].x).hypot(w[1].y - w[0].y);
                prop_assert!(step <= cfg.thrust * cfg.sample_interval + 1e-12);
            }
            let c = fitness_components(&tr, target);
            prop_assert!((c.alpha.powi(2) + c.beta.powi(2) - c.gamma.powi(2)).abs() < 1e-9);
            prop_assert!(c.alpha >= 0.0 && c.beta.abs() <= c.gamma + 1e-12);
            prop_assert!((0.0..=PI).contains(&c.theta));
        }
    }

    #[test]
    fn learning_is_reproducible(seed in any::<u64>(), dim in 1usize..12) {
        let inherited = BrainWeights((0..dim).map(|d| ((d as f64) * 0.37).sin()).collect());
        let params = LearnerParams { population: 5, iterations: 3, ..LearnerParams::default() };
        let f = |w: &BrainWeights| -w.0.iter().map(|v| (v - 0.3).powi(2)).sum::<f64>();
        let a = learn(&inherited, &params, f, &mut seeded(seed)).unwrap();
        let b = learn(&inherited, &params, f, &mut seeded(seed)).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.delta >= 0.0);
        prop_assert!(a.best.0.iter().all(|v| (-1.0..=1.0).contains(v)));
    }

    #[test]
    fn knn_uses_every_entry_when_k_exceeds_archive(
        entries in prop::collection::vec((prop::collection::vec(-1.0f64..1.0, 3), -5.0f64..5.0), 1..5),
        k in 5usize..10,
    ) {
        let mut archive = Archive::new();
        for (w, f) in &entries {
            archive.push(BrainWeights(w.clone()), *f);
        }
        let mean = entries.iter().map(|e| e.1).sum::<f64>() / entries.len() as f64;
        let got = knn_predict(&archive, &BrainWeights(vec![0.0; 3]), k).unwrap();
        prop_assert!((got - mean).abs() < 1e-12);
    }
}
