//! Experiment orchestration: TOML configuration with flag overrides,
//! repeated seeded runs with checkpoint/resume, and the on-disk artifacts
//! of each run.
//!
//! Layout of an experiment directory:
//!
//! ```text
//! <out>/config.toml                  resolved configuration
//! <out>/summary.json                 mean/std across runs per generation
//! <out>/run_NN/stats.csv             per-generation statistics
//! <out>/run_NN/individuals.csv       every robot ever born
//! <out>/run_NN/evaluations.csv       every single-direction evaluation
//! <out>/run_NN/genealogy.dot
//! <out>/run_NN/checkpoint.json       full state, for resuming
//! <out>/run_NN/best_body.json        best robot of the final population
//! <out>/run_NN/best_brain.json       its inherited brain
//! <out>/run_NN/best_learned_brain.json
//! <out>/run_NN/best_trajectory_DDD.csv, one per target direction
//! ```

use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cpg::{BrainFile, BrainWeights, CpgLayout};
use crate::error::{Error, Result};
use crate::evolution::{evaluation_budget, trajectories, EvoParams, Evolution, GenerationStats, Individual, Mode};
use crate::fitness::{EvaluationLog, EvaluationRecord, TARGET_DIRECTIONS};
use crate::genealogy;
use crate::learner::{learn, write_trace, LearnerParams};
use crate::morphology::Morphology;
use crate::report;
use crate::rng::{derive_seed, stream, Purpose};
use crate::sim::SimConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub population: usize,
    pub offspring: usize,
    pub generations: usize,
    pub tournament: usize,
    pub mutation: f64,
    pub crossover: f64,
    pub seed: u64,
    pub repetitions: usize,
    /// Worker threads; 0 uses every core.
    pub threads: usize,
    pub out: PathBuf,
    pub learner: LearnerParams,
    pub sim: SimConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let evo = EvoParams::default();
        ExperimentConfig {
            mode: evo.mode,
            population: evo.population,
            offspring: evo.offspring,
            generations: evo.generations,
            tournament: evo.tournament,
            mutation: evo.mutation,
            crossover: evo.crossover,
            seed: evo.seed,
            repetitions: 10,
            threads: 0,
            out: PathBuf::from("runs"),
            learner: evo.learner,
            sim: evo.sim,
        }
    }
}

/// Command-line overrides, applied on top of the config file.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct Overrides {
    /// `evolution-only` or `learning`
    #[arg(long)]
    pub mode: Option<Mode>,
    #[arg(long)]
    pub generations: Option<usize>,
    #[arg(long)]
    pub population: Option<usize>,
    #[arg(long)]
    pub offspring: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub repetitions: Option<usize>,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Learner population size X
    #[arg(long)]
    pub learner_population: Option<usize>,
    /// Learner iterations g
    #[arg(long)]
    pub learner_iterations: Option<usize>,
    /// Simulated seconds per evaluation
    #[arg(long)]
    pub duration: Option<f64>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is representable in TOML")
    }

    pub fn apply(&mut self, o: &Overrides) {
        macro_rules! set {
            ($($field:ident => $target:expr),*) => {$(
                if let Some(v) = o.$field.clone() {
                    $target = v;
                }
            )*};
        }
        set!(
            mode => self.mode,
            generations => self.generations,
            population => self.population,
            offspring => self.offspring,
            seed => self.seed,
            repetitions => self.repetitions,
            threads => self.threads,
            out => self.out,
            learner_population => self.learner.population,
            learner_iterations => self.learner.iterations,
            duration => self.sim.duration
        );
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::Config("repetitions must be at least 1".into()));
        }
        self.evo_params(0).validate()
    }

    /// Seed of repetition `rep`, derived from the root seed.
    pub fn run_seed(&self, rep: usize) -> u64 {
        derive_seed(self.seed, Purpose::Repetition, rep as u64, 0)
    }

    pub fn evo_params(&self, rep: usize) -> EvoParams {
        EvoParams {
            population: self.population,
            offspring: self.offspring,
            generations: self.generations,
            tournament: self.tournament,
            mutation: self.mutation,
            crossover: self.crossover,
            mode: self.mode,
            learner: self.learner,
            sim: self.sim,
            seed: self.run_seed(rep),
        }
    }
}

pub fn thread_pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))
}

pub fn run_dir(out: &Path, rep: usize) -> PathBuf {
    out.join(format!("run_{rep:02}"))
}

pub const STATS: &str = "stats.csv";
pub const INDIVIDUALS: &str = "individuals.csv";
pub const EVALUATIONS: &str = "evaluations.csv";
pub const GENEALOGY: &str = "genealogy.dot";
pub const CHECKPOINT: &str = "checkpoint.json";
pub const BEST_BODY: &str = "best_body.json";
pub const BEST_BRAIN: &str = "best_brain.json";
pub const BEST_LEARNED_BRAIN: &str = "best_learned_brain.json";

pub fn trajectory_file(target: f64) -> String {
    format!("best_trajectory_{:03}.csv", target.to_degrees().round() as i64)
}

fn append_records(path: &Path, records: &[EvaluationRecord]) -> Result<()> {
    let file = OpenOptions::new()
        .append(true)
        .open(path)
        .map_err(|e| Error::io(path, e))?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(file);
    for r in records {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Drop evaluation rows of robots born after the checkpoint, left behind
/// by an interrupted generation.
fn truncate_log(path: &Path, next_id: u64) -> Result<()> {
    let file = report::open(path)?;
    let mut kept = String::new();
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|e| Error::io(path, e))?;
        let robot = line.split(',').next().and_then(|f| f.parse::<u64>().ok());
        if robot.is_none_or(|id| id < next_id) {
            kept.push_str(&line);
            kept.push('\n');
        }
    }
    fs::write(path, kept).map_err(|e| Error::io(path, e))
}

fn write_checkpoint(dir: &Path, evo: &Evolution) -> Result<()> {
    let tmp = dir.join("checkpoint.json.tmp");
    report::write_json(&tmp, evo)?;
    let path = dir.join(CHECKPOINT);
    fs::rename(&tmp, &path).map_err(|e| Error::io(path, e))
}

/// Run (or resume) one repetition in `dir` and write its artifacts.
pub fn run_repetition(params: &EvoParams, dir: &Path) -> Result<Evolution> {
    let log = dir.join(EVALUATIONS);
    let checkpoint = dir.join(CHECKPOINT);
    let mut evo = if checkpoint.exists() && log.exists() {
        let evo: Evolution = report::read_json(&checkpoint)?;
        if evo.params != *params {
            return Err(Error::Config(format!(
                "{} was written with different parameters; remove it or choose another --out",
                checkpoint.display()
            )));
        }
        truncate_log(&log, evo.next_id)?;
        evo
    } else {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let (evo, records) = Evolution::new(params.clone())?;
        let mut w = EvaluationLog::new(report::create(&log)?)?;
        for r in &records {
            w.append(r)?;
        }
        w.into_inner()?.flush().map_err(|e| Error::io(&log, e))?;
        write_checkpoint(dir, &evo)?;
        evo
    };
    while !evo.finished() {
        let records = evo.step();
        append_records(&log, &records)?;
        write_checkpoint(dir, &evo)?;
    }
    write_run_artifacts(dir, &evo)?;
    Ok(evo)
}

fn brain_file(body: &Morphology, weights: &BrainWeights) -> BrainFile {
    BrainFile {
        ordering: CpgLayout::from_morphology(body).ordering(),
        weights: weights.clone(),
    }
}

pub fn write_run_artifacts(dir: &Path, evo: &Evolution) -> Result<()> {
    report::write_rows(&dir.join(STATS), "generation-stats", &evo.stats)?;
    report::write_rows(&dir.join(INDIVIDUALS), "individuals", &evo.genealogy)?;
    genealogy::write_dot(&dir.join(GENEALOGY), &evo.genealogy)?;
    let best = evo.best();
    report::write_json(&dir.join(BEST_BODY), &best.morphology)?;
    report::write_json(&dir.join(BEST_BRAIN), &brain_file(&best.morphology, &best.inherited))?;
    report::write_json(
        &dir.join(BEST_LEARNED_BRAIN),
        &brain_file(&best.morphology, &best.learned),
    )?;
    for (tr, &target) in trajectories(&best.morphology, &best.learned, &evo.params.sim)
        .iter()
        .zip(TARGET_DIRECTIONS.iter())
    {
        tr.write_csv(report::create(&dir.join(trajectory_file(target)))?)?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

impl MeanStd {
    /// Mean and sample standard deviation (0 for a single value).
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let std = if values.len() > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        } else {
            0.0
        };
        MeanStd { mean, std }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationSummary {
    pub generation: usize,
    pub mean_fitness: MeanStd,
    pub max_fitness: MeanStd,
    pub mean_delta: MeanStd,
    pub mean_velocity: MeanStd,
    pub max_velocity: MeanStd,
    pub mean_size: MeanStd,
    pub mean_proportion: MeanStd,
    pub mean_rel_limbs: MeanStd,
    pub mean_symmetry: MeanStd,
    pub mean_branching: MeanStd,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub run: usize,
    pub seed: u64,
    pub final_mean_fitness: f64,
    pub final_max_fitness: f64,
    pub final_mean_delta: f64,
    pub best_id: u64,
    pub evaluations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationBudget {
    /// Single-direction simulations per robot with joints.
    pub simulations_per_robot: usize,
    /// (population + offspring * generations) * simulations_per_robot.
    pub counted_formula: u64,
    /// (offspring + offspring * generations) * simulations_per_robot, the
    /// arithmetic quoted for the original protocol.
    pub quoted_formula: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub mode: Mode,
    pub repetitions: usize,
    pub budget: EvaluationBudget,
    pub runs: Vec<RunSummary>,
    pub generations: Vec<GenerationSummary>,
}

pub fn summarize(
    config: &ExperimentConfig,
    stats: &[Vec<GenerationStats>],
    runs: Vec<RunSummary>,
) -> ExperimentSummary {
    let params = config.evo_params(0);
    let (counted, quoted) = evaluation_budget(&params);
    let generations = (0..stats.iter().map(Vec::len).min().unwrap_or(0))
        .map(|g| {
            let col = |f: fn(&GenerationStats) -> f64| MeanStd::of(&stats.iter().map(|s| f(&s[g])).collect::<Vec<_>>());
            GenerationSummary {
                generation: g,
                mean_fitness: col(|s| s.mean_fitness),
                max_fitness: col(|s| s.max_fitness),
                mean_delta: col(|s| s.mean_delta),
                mean_velocity: col(|s| s.mean_velocity),
                max_velocity: col(|s| s.max_velocity),
                mean_size: col(|s| s.mean_size),
                mean_proportion: col(|s| s.mean_proportion),
                mean_rel_limbs: col(|s| s.mean_rel_limbs),
                mean_symmetry: col(|s| s.mean_symmetry),
                mean_branching: col(|s| s.mean_branching),
            }
        })
        .collect();
    ExperimentSummary {
        mode: config.mode,
        repetitions: config.repetitions,
        budget: EvaluationBudget {
            simulations_per_robot: params.simulations_per_robot(),
            counted_formula: counted,
            quoted_formula: quoted,
        },
        runs,
        generations,
    }
}

/// Run every repetition of an experiment and write its artifacts.
pub fn cmd_evolve(config: &ExperimentConfig) -> Result<ExperimentSummary> {
    config.validate()?;
    let out = &config.out;
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    // thread count and location do not affect results, so the record
    // leaves them out and reruns elsewhere produce the same file
    let recorded = ExperimentConfig {
        threads: 0,
        out: PathBuf::from("."),
        ..config.clone()
    };
    fs::write(out.join("config.toml"), recorded.to_toml()).map_err(|e| Error::io(out, e))?;
    let pool = thread_pool(config.threads)?;
    let mut stats = Vec::new();
    let mut runs = Vec::new();
    for rep in 0..config.repetitions {
        let params = config.evo_params(rep);
        let evo = pool.install(|| run_repetition(&params, &run_dir(out, rep)))?;
        let last = evo.stats.last().expect("stats include generation 0");
        runs.push(RunSummary {
            run: rep,
            seed: params.seed,
            final_mean_fitness: last.mean_fitness,
            final_max_fitness: last.max_fitness,
            final_mean_delta: last.mean_delta,
            best_id: evo.best().id,
            evaluations: evo.evaluations,
        });
        stats.push(evo.stats);
    }
    let summary = summarize(config, &stats, runs);
    report::write_json(&out.join("summary.json"), &summary)?;
    Ok(summary)
}

#[derive(Debug, Clone)]
pub struct LearnRequest {
    pub body: PathBuf,
    pub brain: PathBuf,
    pub learner: LearnerParams,
    pub sim: SimConfig,
    pub seed: u64,
    /// Replace the simulator with a constant-zero evaluator.
    pub flat_fitness: bool,
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearnReport {
    pub joints: usize,
    pub dimension: usize,
    pub inherited_fitness: f64,
    pub best_fitness: f64,
    pub delta: f64,
    /// Brains evaluated over the full direction set.
    pub evaluations: usize,
    pub simulations: usize,
    pub best: BrainFile,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum BrainInput {
    File(BrainFile),
    Bare(BrainWeights),
}

pub fn load_body(path: &Path) -> Result<Morphology> {
    let body: Morphology = report::read_json(path)?;
    body.check().map_err(|m| Error::parse(path, m))?;
    Ok(body)
}

/// Brain weights for `body`, either a bare JSON array or a labelled file
/// whose ordering must match the body's layout.
pub fn load_brain(path: &Path, body: &Morphology) -> Result<BrainWeights> {
    let layout = CpgLayout::from_morphology(body);
    let weights = match report::read_json::<BrainInput>(path)? {
        BrainInput::Bare(w) => w,
        BrainInput::File(f) => {
            if f.ordering != layout.ordering() {
                return Err(Error::parse(
                    path,
                    "weight ordering does not match the body's CPG layout",
                ));
            }
            f.weights
        }
    };
    if weights.len() != layout.dimension() {
        return Err(Error::parse(
            path,
            format!(
                "expected {} weights for this body, found {}",
                layout.dimension(),
                weights.len()
            ),
        ));
    }
    if weights.as_slice().iter().any(|w| !w.is_finite()) {
        return Err(Error::parse(path, "weights must be finite"));
    }
    Ok(weights.clamped())
}

pub fn cmd_learn(req: &LearnRequest) -> Result<LearnReport> {
    req.learner.validate()?;
    req.sim.validate()?;
    let body = load_body(&req.body)?;
    let inherited = load_brain(&req.brain, &body)?;
    let mut rng = stream(req.seed, Purpose::Learner, 0, 0);
    let outcome = if req.flat_fitness {
        learn(&inherited, &req.learner, |_| 0.0, &mut rng)?
    } else {
        learn(
            &inherited,
            &req.learner,
            |w| crate::evolution::evaluate_brain(0, &body, w, &req.sim).fitness,
            &mut rng,
        )?
    };
    if let Some(path) = &req.trace {
        let mut out = report::create(path)?;
        write_trace(&mut out, &outcome.trace)?;
        out.flush().map_err(|e| Error::io(path, e))?;
    }
    Ok(LearnReport {
        joints: body.joints().len(),
        dimension: inherited.len(),
        inherited_fitness: outcome.inherited_fitness,
        best_fitness: outcome.best_fitness,
        delta: outcome.delta,
        evaluations: outcome.evaluations,
        simulations: outcome.evaluations * TARGET_DIRECTIONS.len(),
        best: brain_file(&body, &outcome.best),
    })
}

/// Develop a robot from seeded random genomes, for examples and tests.
pub fn random_individual(seed: u64) -> Individual {
    use crate::cppn::{CppnGenome, BODY_INPUTS, BODY_OUTPUTS, BRAIN_INPUTS, BRAIN_OUTPUTS};
    let mut rng = stream(seed, Purpose::Init, 0, 0);
    let body = CppnGenome::random(BODY_INPUTS, BODY_OUTPUTS, &mut rng);
    let brain = CppnGenome::random(BRAIN_INPUTS, BRAIN_OUTPUTS, &mut rng);
    Individual::develop(0, Vec::new(), 0, body, brain)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn smoke(out: &Path) -> ExperimentConfig {
        ExperimentConfig {
            mode: Mode::EvolutionPlusLearning,
            population: 6,
            offspring: 3,
            generations: 2,
            repetitions: 2,
            seed: 11,
            out: out.to_path_buf(),
            learner: LearnerParams {
                population: 4,
                iterations: 1,
                ..LearnerParams::default()
            },
            sim: SimConfig {
                duration: 3.0,
                ..SimConfig::default()
            },
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn toml_round_trip_and_unknown_keys() {
        let cfg = ExperimentConfig::default();
        assert_eq!(ExperimentConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
        let partial = ExperimentConfig::from_toml("mode = \"evolution-only\"\n[learner]\npopulation = 5\n").unwrap();
        assert_eq!(partial.mode, Mode::EvolutionOnly);
        assert_eq!(partial.learner.population, 5);
        assert_eq!(partial.learner.iterations, 10);
        assert!(ExperimentConfig::from_toml("mutaton = 0.5\n").is_err());
        assert!(ExperimentConfig::from_toml("[sim]\nspeed = 1.0\n").is_err());
    }

    #[test]
    fn overrides_win_and_validation_runs() {
        let mut cfg = ExperimentConfig::default();
        cfg.apply(&Overrides {
            generations: Some(3),
            learner_population: Some(4),
            ..Overrides::default()
        });
        assert_eq!((cfg.generations, cfg.learner.population), (3, 4));
        cfg.offspring = cfg.population + 1;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn repetition_seeds_differ() {
        let cfg = ExperimentConfig::default();
        assert_ne!(cfg.run_seed(0), cfg.run_seed(1));
        assert_eq!(cfg.run_seed(3), cfg.run_seed(3));
    }

    #[test]
    fn resume_matches_uninterrupted_run() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = smoke(&tmp.path().join("a"));
        let params = cfg.evo_params(0);
        let full = run_repetition(&params, &run_dir(&cfg.out, 0)).unwrap();

        let dir = tmp.path().join("b");
        fs::create_dir_all(&dir).unwrap();
        let (mut evo, records) = Evolution::new(params.clone()).unwrap();
        let mut w = EvaluationLog::new(report::create(&dir.join(EVALUATIONS)).unwrap()).unwrap();
        for r in &records {
            w.append(r).unwrap();
        }
        w.into_inner().unwrap().flush().unwrap();
        let partial = evo.step();
        write_checkpoint(&dir, &evo).unwrap();
        // rows of a generation that never reached its checkpoint
        evo.step();
        append_records(&dir.join(EVALUATIONS), &partial).unwrap();
        let resumed = run_repetition(&params, &dir).unwrap();
        assert_eq!(resumed, full);
        for file in [STATS, INDIVIDUALS, EVALUATIONS, GENEALOGY, CHECKPOINT, BEST_BODY] {
            let a = fs::read(run_dir(&cfg.out, 0).join(file)).unwrap();
            let b = fs::read(dir.join(file)).unwrap();
            assert!(a == b, "{file} differs after resume");
        }
    }

    #[test]
    fn mismatched_checkpoint_is_rejected() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = smoke(tmp.path());
        run_repetition(&cfg.evo_params(0), &run_dir(&cfg.out, 0)).unwrap();
        assert!(matches!(
            run_repetition(&cfg.evo_params(1), &run_dir(&cfg.out, 0)),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn evolve_writes_every_artifact() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = smoke(tmp.path());
        let summary = cmd_evolve(&cfg).unwrap();
        assert_eq!(summary.runs.len(), 2);
        assert_eq!(summary.generations.len(), 3);
        for rep in 0..2 {
            let dir = run_dir(tmp.path(), rep);
            for file in [
                STATS,
                INDIVIDUALS,
                EVALUATIONS,
                GENEALOGY,
                CHECKPOINT,
                BEST_BODY,
                BEST_BRAIN,
            ] {
                assert!(dir.join(file).exists(), "{file}");
            }
            for t in TARGET_DIRECTIONS {
                assert!(dir.join(trajectory_file(t)).exists());
            }
        }
        assert_eq!(trajectory_file(TARGET_DIRECTIONS[2]), "best_trajectory_240.csv");
        let reread: ExperimentSummary = report::read_json(&tmp.path().join("summary.json")).unwrap();
        assert_eq!(reread, summary);
    }

    #[test]
    fn mean_std() {
        assert_eq!(MeanStd::of(&[2.0]), MeanStd { mean: 2.0, std: 0.0 });
        let m = MeanStd::of(&[1.0, 3.0]);
        assert_eq!(m.mean, 2.0);
        assert!((m.std - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn learn_command_reports_budget_and_rejects_bad_brains() {
        let tmp = tempfile::tempdir().unwrap();
        let ind = (0..).map(random_individual).find(|i| !i.inherited.is_empty()).unwrap();
        let body = tmp.path().join("body.json");
        let brain = tmp.path().join("brain.json");
        report::write_json(&body, &ind.morphology).unwrap();
        report::write_json(&brain, &brain_file(&ind.morphology, &ind.inherited)).unwrap();
        let req = LearnRequest {
            body: body.clone(),
            brain: brain.clone(),
            learner: LearnerParams::default(),
            sim: SimConfig {
                duration: 2.0,
                ..SimConfig::default()
            },
            seed: 1,
            flat_fitness: true,
            trace: Some(tmp.path().join("trace.csv")),
        };
        let r = cmd_learn(&req).unwrap();
        assert_eq!((r.delta, r.evaluations, r.simulations), (0.0, 110, 330));
        assert!(tmp.path().join("trace.csv").exists());

        report::write_json(&brain, &vec![0.5; ind.inherited.len() + 1]).unwrap();
        assert!(matches!(cmd_learn(&req), Err(Error::Parse { .. })));
        fs::write(&brain, "{not json").unwrap();
        assert!(cmd_learn(&req).is_err());
    }

    #[test]
    fn jointless_body_learns_nothing() {
        let tmp = tempfile::tempdir().unwrap();
        let body = tmp.path().join("body.json");
        let brain = tmp.path().join("brain.json");
        report::write_json(&body, &Morphology::core_only()).unwrap();
        fs::write(&brain, "[]").unwrap();
        let r = cmd_learn(&LearnRequest {
            body,
            brain,
            learner: LearnerParams::default(),
            sim: SimConfig::default(),
            seed: 0,
            flat_fitness: false,
            trace: None,
        })
        .unwrap();
        assert_eq!((r.delta, r.joints, r.evaluations), (0.0, 0, 0));
    }
}
