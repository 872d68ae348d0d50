//! The outer (mu + lambda) loop over bodies and brains, with or without
//! infant learning.
//!
//! Each generation: binary tournaments pick lambda parent pairs, each pair
//! yields one child by crossover then mutation of both genomes, children
//! are evaluated (after learning, in learning mode), and the next
//! population is the best mu - lambda parents plus every child.
//!
//! Random streams are keyed by generation and slot (see [`crate::rng`]),
//! and children are produced sequentially before being evaluated in
//! parallel, so results do not depend on the thread count.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cpg::{brain_weights, BrainWeights, CpgLayout};
use crate::cppn::{
    self, CppnGenome, Fitter, InnovationTracker, MutationRates, BODY_INPUTS, BODY_OUTPUTS, BRAIN_INPUTS, BRAIN_OUTPUTS,
};
use crate::error::{Error, Result};
use crate::fitness::{aggregate_fitness, fitness, fitness_components, EvaluationRecord, TARGET_DIRECTIONS};
use crate::learner::{learn, LearnerParams};
use crate::morphology::{compute_descriptors, decode_body, MorphDescriptors, Morphology};
use crate::rng::{stream, Purpose};
use crate::sim::{displacement_velocity, simulate, SimConfig, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "evolution-only")]
    EvolutionOnly,
    #[serde(rename = "learning")]
    EvolutionPlusLearning,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::EvolutionOnly => "evolution-only",
            Mode::EvolutionPlusLearning => "learning",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "evolution-only" | "evolution_only" | "eo" => Ok(Mode::EvolutionOnly),
            "learning" | "evolution-learning" | "evolution+learning" | "el" => Ok(Mode::EvolutionPlusLearning),
            _ => Err(Error::Config(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvoParams {
    pub population: usize,
    pub offspring: usize,
    pub generations: usize,
    pub tournament: usize,
    pub mutation: f64,
    pub crossover: f64,
    pub mode: Mode,
    pub learner: LearnerParams,
    pub sim: SimConfig,
    pub seed: u64,
}

impl Default for EvoParams {
    fn default() -> Self {
        EvoParams {
            population: 100,
            offspring: 50,
            generations: 30,
            tournament: 2,
            mutation: 0.8,
            crossover: 0.8,
            mode: Mode::EvolutionPlusLearning,
            learner: LearnerParams::default(),
            sim: SimConfig::default(),
            seed: 0,
        }
    }
}

impl EvoParams {
    pub fn validate(&self) -> Result<()> {
        let prob = |p: f64| (0.0..=1.0).contains(&p);
        if self.population == 0 || self.offspring == 0 || self.offspring > self.population {
            return Err(Error::Config(format!(
                "need 0 < offspring ({}) <= population ({})",
                self.offspring, self.population
            )));
        }
        if self.tournament == 0 || !prob(self.mutation) || !prob(self.crossover) {
            return Err(Error::Config("tournament size and probabilities out of range".into()));
        }
        self.sim.validate()?;
        if self.mode == Mode::EvolutionPlusLearning {
            self.learner.validate()?;
        }
        Ok(())
    }

    /// Single-direction simulations spent on one robot with joints.
    pub fn simulations_per_robot(&self) -> usize {
        TARGET_DIRECTIONS.len()
            * match self.mode {
                Mode::EvolutionOnly => 1,
                Mode::EvolutionPlusLearning => self.learner.budget(),
            }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub id: u64,
    pub parents: Vec<u64>,
    pub generation: usize,
    pub body: CppnGenome,
    pub brain: CppnGenome,
    pub morphology: Morphology,
    pub descriptors: MorphDescriptors,
    pub inherited: BrainWeights,
    pub learned: BrainWeights,
    pub fitness_before: f64,
    pub fitness_after: f64,
    /// Mean displacement velocity over the target directions, learned brain.
    pub velocity: f64,
    /// Single-direction simulations spent on this robot.
    pub simulations: usize,
}

impl Individual {
    /// Develop genomes into an unevaluated robot.
    pub fn develop(id: u64, parents: Vec<u64>, generation: usize, body: CppnGenome, brain: CppnGenome) -> Self {
        let morphology = decode_body(&body);
        let descriptors = compute_descriptors(&morphology);
        let inherited = brain_weights(&CpgLayout::from_morphology(&morphology), &brain);
        Individual {
            id,
            parents,
            generation,
            body,
            brain,
            morphology,
            descriptors,
            learned: inherited.clone(),
            inherited,
            fitness_before: 0.0,
            fitness_after: 0.0,
            velocity: 0.0,
            simulations: 0,
        }
    }

    pub fn delta(&self) -> f64 {
        self.fitness_after - self.fitness_before
    }
}

/// Fitness of one brain on one body, averaged over the target directions.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionalEvaluation {
    pub fitness: f64,
    pub velocity: f64,
    pub records: Vec<EvaluationRecord>,
}

pub fn evaluate_brain(robot: u64, body: &Morphology, brain: &BrainWeights, sim: &SimConfig) -> DirectionalEvaluation {
    let mut per_direction = [0.0; 3];
    let mut velocity = 0.0;
    let mut records = Vec::with_capacity(3);
    for (k, &target) in TARGET_DIRECTIONS.iter().enumerate() {
        let tr = simulate(body, brain, target, sim).expect("brain matches body layout");
        let c = fitness_components(&tr, target);
        per_direction[k] = fitness(&c);
        velocity += displacement_velocity(&tr) / 3.0;
        records.push(EvaluationRecord::new(robot, target, &c));
    }
    DirectionalEvaluation {
        fitness: aggregate_fitness(&per_direction),
        velocity,
        records,
    }
}

/// Trajectories of a brain towards every target direction.
pub fn trajectories(body: &Morphology, brain: &BrainWeights, sim: &SimConfig) -> Vec<Trajectory> {
    TARGET_DIRECTIONS
        .iter()
        .map(|&t| simulate(body, brain, t, sim).expect("brain matches body layout"))
        .collect()
}

/// Assess a robot. In learning mode the inherited brain is improved first
/// and the robot is judged by its learned brain.
pub fn evaluate_individual(mut ind: Individual, params: &EvoParams) -> (Individual, Vec<EvaluationRecord>) {
    match params.mode {
        Mode::EvolutionOnly => {
            let eval = evaluate_brain(ind.id, &ind.morphology, &ind.inherited, &params.sim);
            ind.fitness_before = eval.fitness;
            ind.fitness_after = eval.fitness;
            ind.velocity = eval.velocity;
            ind.learned = ind.inherited.clone();
            ind.simulations = eval.records.len();
            (ind, eval.records)
        }
        Mode::EvolutionPlusLearning => {
            let mut rng = stream(params.seed, Purpose::Learner, ind.id, 0);
            let mut log: Vec<DirectionalEvaluation> = Vec::new();
            let outcome = learn(
                &ind.inherited,
                &params.learner,
                |w| {
                    let eval = evaluate_brain(ind.id, &ind.morphology, w, &params.sim);
                    let f = eval.fitness;
                    log.push(eval);
                    f
                },
                &mut rng,
            )
            .expect("learner parameters validated with the run");
            ind.fitness_before = outcome.inherited_fitness;
            ind.fitness_after = outcome.best_fitness;
            ind.learned = outcome.best;
            ind.velocity = log.get(outcome.best_index).map_or(0.0, |e| e.velocity);
            ind.simulations = log.len() * TARGET_DIRECTIONS.len();
            (ind, log.into_iter().flat_map(|e| e.records).collect())
        }
    }
}

/// Higher `fitness_after` first, then lower id.
pub fn rank(a: &Individual, b: &Individual) -> Ordering {
    b.fitness_after.total_cmp(&a.fitness_after).then(a.id.cmp(&b.id))
}

/// Winner of one tournament. Equal fitness keeps the earlier draw, so a
/// population of equals is sampled uniformly.
fn tournament<R: Rng + ?Sized>(pop: &[Individual], size: usize, rng: &mut R) -> usize {
    let mut best = rng.random_range(0..pop.len());
    for _ in 1..size {
        let c = rng.random_range(0..pop.len());
        if pop[c].fitness_after > pop[best].fitness_after {
            best = c;
        }
    }
    best
}

/// `count` parent pairs (population indices), each parent the winner of a
/// tournament drawn with replacement.
pub fn select_parents<R: Rng + ?Sized>(
    pop: &[Individual],
    count: usize,
    size: usize,
    rng: &mut R,
) -> Vec<(usize, usize)> {
    (0..count)
        .map(|_| (tournament(pop, size, rng), tournament(pop, size, rng)))
        .collect()
}

pub struct Trackers {
    pub body: InnovationTracker,
    pub brain: InnovationTracker,
}

impl Default for Trackers {
    fn default() -> Self {
        Trackers {
            body: InnovationTracker::new(BODY_INPUTS, BODY_OUTPUTS),
            brain: InnovationTracker::new(BRAIN_INPUTS, BRAIN_OUTPUTS),
        }
    }
}

/// One child from a parent pair: crossover then mutation of body and
/// brain genomes, developed but not yet evaluated.
#[allow(clippy::too_many_arguments)]
pub fn reproduce<R: Rng + ?Sized>(
    a: &Individual,
    b: &Individual,
    id: u64,
    generation: usize,
    params: &EvoParams,
    trackers: &mut Trackers,
    rng: &mut R,
) -> Individual {
    let fitter = if rank(a, b) == Ordering::Greater {
        Fitter::B
    } else {
        Fitter::A
    };
    let rates = MutationRates::with_probability(params.mutation);
    let body = cppn::crossover(&a.body, &b.body, fitter, params.crossover, rng).expect("body shapes agree");
    let body = cppn::mutate(&body, rng, &rates, &mut trackers.body);
    let brain = cppn::crossover(&a.brain, &b.brain, fitter, params.crossover, rng).expect("brain shapes agree");
    let brain = cppn::mutate(&brain, rng, &rates, &mut trackers.brain);
    let parents = if a.id == b.id { vec![a.id] } else { vec![a.id, b.id] };
    Individual::develop(id, parents, generation, body, brain)
}

/// Best `mu - lambda` parents followed by all offspring.
pub fn select_survivors(mut parents: Vec<Individual>, offspring: Vec<Individual>, mu: usize) -> Vec<Individual> {
    parents.sort_by(rank);
    parents.truncate(mu.saturating_sub(offspring.len()));
    parents.extend(offspring);
    parents
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub generation: usize,
    pub mean_fitness: f64,
    pub max_fitness: f64,
    pub mean_fitness_before: f64,
    pub mean_delta: f64,
    pub mean_size: f64,
    pub mean_proportion: f64,
    pub mean_bricks: f64,
    pub mean_rel_limbs: f64,
    pub mean_symmetry: f64,
    pub mean_branching: f64,
    pub mean_velocity: f64,
    pub max_velocity: f64,
    /// Robots created so far.
    pub robots: u64,
    /// Single-direction simulations so far.
    pub evaluations: u64,
}

impl GenerationStats {
    fn of(generation: usize, pop: &[Individual], robots: u64, evaluations: u64) -> Self {
        let n = pop.len() as f64;
        let mean = |f: &dyn Fn(&Individual) -> f64| pop.iter().map(f).sum::<f64>() / n;
        let max = |f: &dyn Fn(&Individual) -> f64| pop.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
        GenerationStats {
            generation,
            mean_fitness: mean(&|i| i.fitness_after),
            max_fitness: max(&|i| i.fitness_after),
            mean_fitness_before: mean(&|i| i.fitness_before),
            mean_delta: mean(&|i| i.delta()),
            mean_size: mean(&|i| i.descriptors.absolute_size as f64),
            mean_proportion: mean(&|i| i.descriptors.proportion),
            mean_bricks: mean(&|i| i.descriptors.num_bricks as f64),
            mean_rel_limbs: mean(&|i| i.descriptors.rel_limbs),
            mean_symmetry: mean(&|i| i.descriptors.symmetry),
            mean_branching: mean(&|i| i.descriptors.branching),
            mean_velocity: mean(&|i| i.velocity),
            max_velocity: max(&|i| i.velocity),
            robots,
            evaluations,
        }
    }
}

/// Everything known about one robot that ever lived, for genealogy and
/// landscape analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndividualRecord {
    pub id: u64,
    pub generation: usize,
    pub parent_a: Option<u64>,
    pub parent_b: Option<u64>,
    pub fitness_before: f64,
    pub fitness_after: f64,
    pub delta: f64,
    pub absolute_size: usize,
    pub proportion: f64,
    pub num_bricks: usize,
    pub rel_limbs: f64,
    pub symmetry: f64,
    pub branching: f64,
    pub velocity: f64,
    pub joints: usize,
}

impl From<&Individual> for IndividualRecord {
    fn from(i: &Individual) -> Self {
        IndividualRecord {
            id: i.id,
            generation: i.generation,
            parent_a: i.parents.first().copied(),
            parent_b: i.parents.get(1).copied(),
            fitness_before: i.fitness_before,
            fitness_after: i.fitness_after,
            delta: i.delta(),
            absolute_size: i.descriptors.absolute_size,
            proportion: i.descriptors.proportion,
            num_bricks: i.descriptors.num_bricks,
            rel_limbs: i.descriptors.rel_limbs,
            symmetry: i.descriptors.symmetry,
            branching: i.descriptors.branching,
            velocity: i.velocity,
            joints: i.morphology.joints().len(),
        }
    }
}

impl IndividualRecord {
    pub fn parents(&self) -> impl Iterator<Item = u64> {
        self.parent_a.into_iter().chain(self.parent_b)
    }
}

/// Complete, resumable state of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evolution {
    pub params: EvoParams,
    pub generation: usize,
    pub next_id: u64,
    pub population: Vec<Individual>,
    pub genealogy: Vec<IndividualRecord>,
    pub stats: Vec<GenerationStats>,
    pub evaluations: u64,
    body_tracker: InnovationTracker,
    brain_tracker: InnovationTracker,
}

fn evaluate_all(batch: Vec<Individual>, params: &EvoParams) -> (Vec<Individual>, Vec<EvaluationRecord>) {
    let evaluated: Vec<(Individual, Vec<EvaluationRecord>)> = batch
        .into_par_iter()
        .map(|ind| evaluate_individual(ind, params))
        .collect();
    let mut records = Vec::new();
    let mut out = Vec::with_capacity(evaluated.len());
    for (ind, r) in evaluated {
        records.extend(r);
        out.push(ind);
    }
    (out, records)
}

impl Evolution {
    /// Random initial population, evaluated. Returns the evaluation log
    /// rows produced.
    pub fn new(params: EvoParams) -> Result<(Self, Vec<EvaluationRecord>)> {
        params.validate()?;
        let founders: Vec<Individual> = (0..params.population as u64)
            .map(|id| {
                let mut rng = stream(params.seed, Purpose::Init, 0, id);
                let body = CppnGenome::random(BODY_INPUTS, BODY_OUTPUTS, &mut rng);
                let brain = CppnGenome::random(BRAIN_INPUTS, BRAIN_OUTPUTS, &mut rng);
                Individual::develop(id, Vec::new(), 0, body, brain)
            })
            .collect();
        let (population, records) = evaluate_all(founders, &params);
        let trackers = Trackers::default();
        let mut evo = Evolution {
            generation: 0,
            next_id: params.population as u64,
            genealogy: population.iter().map(IndividualRecord::from).collect(),
            evaluations: records.len() as u64,
            stats: Vec::new(),
            population,
            params,
            body_tracker: trackers.body,
            brain_tracker: trackers.brain,
        };
        evo.record_stats();
        Ok((evo, records))
    }

    fn record_stats(&mut self) {
        let stats = GenerationStats::of(self.generation, &self.population, self.next_id, self.evaluations);
        self.stats.push(stats);
    }

    pub fn finished(&self) -> bool {
        self.generation >= self.params.generations
    }

    /// Advance one generation.
    pub fn step(&mut self) -> Vec<EvaluationRecord> {
        let generation = self.generation + 1;
        let params = &self.params;
        let mut rng = stream(params.seed, Purpose::Selection, generation as u64, 0);
        let pairs = select_parents(&self.population, params.offspring, params.tournament, &mut rng);
        let mut trackers = Trackers {
            body: self.body_tracker.clone(),
            brain: self.brain_tracker.clone(),
        };
        let children: Vec<Individual> = pairs
            .iter()
            .enumerate()
            .map(|(slot, &(a, b))| {
                let mut rng = stream(params.seed, Purpose::Variation, generation as u64, slot as u64);
                let id = self.next_id + slot as u64;
                reproduce(
                    &self.population[a],
                    &self.population[b],
                    id,
                    generation,
                    params,
                    &mut trackers,
                    &mut rng,
                )
            })
            .collect();
        self.body_tracker = trackers.body;
        self.brain_tracker = trackers.brain;
        self.next_id += children.len() as u64;

        let (children, records) = evaluate_all(children, &self.params);
        self.genealogy.extend(children.iter().map(IndividualRecord::from));
        self.evaluations += records.len() as u64;
        let parents = std::mem::take(&mut self.population);
        self.population = select_survivors(parents, children, self.params.population);
        self.generation = generation;
        self.record_stats();
        records
    }

    pub fn best(&self) -> &Individual {
        self.population
            .iter()
            .min_by(|a, b| rank(a, b))
            .expect("population is never empty")
    }
}

/// Result of a complete run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub stats: Vec<GenerationStats>,
    pub genealogy: Vec<IndividualRecord>,
    pub population: Vec<Individual>,
}

pub fn run_evolution(params: EvoParams) -> Result<RunResult> {
    let (mut evo, _) = Evolution::new(params)?;
    while !evo.finished() {
        evo.step();
    }
    Ok(RunResult {
        stats: evo.stats,
        genealogy: evo.genealogy,
        population: evo.population,
    })
}

/// Single-direction evaluation counts for a run: what this crate counts
/// (every robot, including all founders) and the formula quoted for the
/// original protocol, which starts from `offspring` founders.
pub fn evaluation_budget(params: &EvoParams) -> (u64, u64) {
    let per_robot = params.simulations_per_robot() as u64;
    let g = params.generations as u64;
    let counted = (params.population as u64 + params.offspring as u64 * g) * per_robot;
    let quoted = (params.offspring as u64 + params.offspring as u64 * g) * per_robot;
    (counted, quoted)
}
