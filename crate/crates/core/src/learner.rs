//! Infant learning with reversible differential evolution and a K-nearest
//! neighbour surrogate (RevDEknn).
//!
//! Each iteration maps X random triplets of the population through the
//! invertible transform [`revde_matrix`], producing 3X candidates. A K-NN
//! regressor over every brain evaluated so far ranks the candidates, and
//! only the X most promising are run in the simulator. The population is
//! then the best X (by real fitness) of old and new members.

use std::cmp::Ordering;
use std::io::Write;

use rand::seq::index::sample;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::cpg::BrainWeights;
use crate::error::{Error, Result};
use crate::report;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LearnerParams {
    pub population: usize,
    pub scaling: f64,
    pub crossover: f64,
    pub neighbours: usize,
    pub iterations: usize,
    pub init_sigma: f64,
}

impl Default for LearnerParams {
    fn default() -> Self {
        LearnerParams {
            population: 10,
            scaling: 0.5,
            crossover: 0.9,
            neighbours: 3,
            iterations: 10,
            init_sigma: 0.5,
        }
    }
}

impl LearnerParams {
    pub fn validate(&self) -> Result<()> {
        let ok = self.population >= 4
            && self.scaling > 0.0
            && (0.0..=1.0).contains(&self.crossover)
            && self.neighbours >= 1
            && self.iterations >= 1
            && self.init_sigma >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid learner parameters: {self:?}")))
        }
    }

    /// Real evaluations spent on one robot: the initial population plus X
    /// per iteration.
    pub fn budget(&self) -> usize {
        self.population * (self.iterations + 1)
    }
}

/// The transform taking a triplet (x_i, x_j, x_k) to (y_1, y_2, y_3).
pub fn revde_matrix(f: f64) -> [[f64; 3]; 3] {
    let f2 = f * f;
    let f3 = f2 * f;
    [
        [1.0, f, -f],
        [-f, 1.0 - f2, f + f2],
        [f + f2, -f + f2 + f3, 1.0 - 2.0 * f2 - f3],
    ]
}

/// Closed-form inverse by cofactors.
pub fn invert3(m: &[[f64; 3]; 3]) -> Option<[[f64; 3]; 3]> {
    let c = |r: usize, k: usize| {
        let (r1, r2) = ((r + 1) % 3, (r + 2) % 3);
        let (k1, k2) = ((k + 1) % 3, (k + 2) % 3);
        m[r1][k1] * m[r2][k2] - m[r1][k2] * m[r2][k1]
    };
    let det = m[0][0] * c(0, 0) + m[0][1] * c(0, 1) + m[0][2] * c(0, 2);
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    let mut inv = [[0.0; 3]; 3];
    for (r, row) in inv.iter_mut().enumerate() {
        for (k, v) in row.iter_mut().enumerate() {
            *v = c(k, r) / det;
        }
    }
    Some(inv)
}

pub fn determinant3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Reversible differential mutation of one triplet.
pub fn revde_triplet(xi: &BrainWeights, xj: &BrainWeights, xk: &BrainWeights, f: f64) -> Result<[BrainWeights; 3]> {
    let n = xi.len();
    for other in [xj, xk] {
        if other.len() != n {
            return Err(Error::LengthMismatch(n, other.len()));
        }
    }
    let (a, b, c) = (&xi.0, &xj.0, &xk.0);
    let y1: Vec<f64> = (0..n).map(|d| a[d] + f * (b[d] - c[d])).collect();
    let y2: Vec<f64> = (0..n).map(|d| b[d] + f * (c[d] - y1[d])).collect();
    let y3: Vec<f64> = (0..n).map(|d| c[d] + f * (y1[d] - y2[d])).collect();
    Ok([BrainWeights(y1), BrainWeights(y2), BrainWeights(y3)])
}

/// Binomial crossover of a mutant `y` with its base `x`, clamped to
/// [-1, 1]. Each dimension is taken from `y` with probability `p`.
pub fn uniform_crossover<R: Rng + ?Sized>(y: &BrainWeights, x: &BrainWeights, p: f64, rng: &mut R) -> BrainWeights {
    debug_assert_eq!(y.len(), x.len());
    BrainWeights(
        y.0.iter()
            .zip(&x.0)
            .map(|(&yd, &xd)| if rng.random_bool(p) { yd } else { xd })
            .collect(),
    )
    .clamped()
}

/// Brains evaluated by the simulator, in insertion order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Archive {
    entries: Vec<(BrainWeights, f64)>,
}

impl Archive {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, weights: BrainWeights, fitness: f64) {
        self.entries.push((weights, fitness));
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(BrainWeights, f64)] {
        &self.entries
    }

    /// Index of the best entry; the earliest wins ties.
    pub fn best(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for (i, (_, f)) in self.entries.iter().enumerate() {
            if best.is_none_or(|b| *f > self.entries[b].1) {
                best = Some(i);
            }
        }
        best
    }
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Mean fitness of the `k` archive entries closest to `candidate`
/// (Euclidean), earlier entries winning distance ties. Uses every entry
/// when the archive holds fewer than `k`.
pub fn knn_predict(archive: &Archive, candidate: &BrainWeights, k: usize) -> Result<f64> {
    if archive.is_empty() {
        return Err(Error::EmptyArchive);
    }
    let mut ranked: Vec<(f64, usize)> = archive
        .entries
        .iter()
        .enumerate()
        .map(|(i, (w, _))| (squared_distance(&w.0, &candidate.0), i))
        .collect();
    let k = k.clamp(1, ranked.len());
    let order = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if k < ranked.len() {
        ranked.select_nth_unstable_by(k - 1, order);
        ranked.truncate(k);
    }
    ranked.sort_unstable_by(order);
    let sum: f64 = ranked.iter().map(|&(_, i)| archive.entries[i].1).sum();
    Ok(sum / k as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub best_fitness: f64,
    /// Mean absolute difference between predicted and real fitness of the
    /// candidates evaluated this iteration. Zero for the initial population.
    pub prediction_error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LearnOutcome {
    pub best: BrainWeights,
    pub best_fitness: f64,
    pub inherited_fitness: f64,
    pub delta: f64,
    pub evaluations: usize,
    /// Archive index of `best`, equal to its evaluation order.
    pub best_index: usize,
    pub trace: Vec<TraceRow>,
}

pub fn write_trace<W: Write>(out: W, trace: &[TraceRow]) -> Result<()> {
    let mut w = report::csv_writer(out, "learning-trace")?;
    w.write_record(["iteration", "best_fitness", "prediction_error", "evaluations"])?;
    for row in trace {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::io("learning-trace", e))
}

fn by_fitness_desc(a: f64, b: f64) -> Ordering {
    b.total_cmp(&a)
}

/// Improve `inherited` with RevDEknn. `evaluate` runs the real simulator
/// and is called exactly `params.budget()` times (never for a jointless
/// body, signalled by an empty weight vector).
pub fn learn<R, E>(
    inherited: &BrainWeights,
    params: &LearnerParams,
    mut evaluate: E,
    rng: &mut R,
) -> Result<LearnOutcome>
where
    R: Rng + ?Sized,
    E: FnMut(&BrainWeights) -> f64,
{
    params.validate()?;
    if inherited.is_empty() {
        return Ok(LearnOutcome {
            best: inherited.clone(),
            best_fitness: 0.0,
            inherited_fitness: 0.0,
            delta: 0.0,
            evaluations: 0,
            best_index: 0,
            trace: Vec::new(),
        });
    }
    let x = params.population;
    let noise = Normal::new(0.0, params.init_sigma).map_err(|e| Error::Config(e.to_string()))?;
    let mut archive = Archive::new();
    let mut population: Vec<(BrainWeights, f64)> = Vec::with_capacity(x);
    for m in 0..x {
        let w = if m == 0 {
            inherited.clone()
        } else {
            BrainWeights(inherited.0.iter().map(|v| v + noise.sample(rng)).collect()).clamped()
        };
        let f = evaluate(&w);
        archive.push(w.clone(), f);
        population.push((w, f));
    }
    let inherited_fitness = population[0].1;
    let best_so_far = |a: &Archive| a.entries[a.best().expect("archive is non-empty")].1;
    let mut trace = vec![TraceRow {
        iteration: 0,
        best_fitness: best_so_far(&archive),
        prediction_error: 0.0,
        evaluations: archive.len(),
    }];

    for iteration in 1..=params.iterations {
        let mut candidates = Vec::with_capacity(3 * x);
        for _ in 0..x {
            let idx = sample(rng, x, 3);
            let members = [idx.index(0), idx.index(1), idx.index(2)];
            let [pi, pj, pk] = members.map(|m| &population[m].0);
            let mutants = revde_triplet(pi, pj, pk, params.scaling)?;
            for (y, &base) in mutants.iter().zip(&members) {
                candidates.push(uniform_crossover(y, &population[base].0, params.crossover, rng));
            }
        }
        let mut predicted: Vec<(f64, usize)> = candidates
            .iter()
            .enumerate()
            .map(|(i, c)| knn_predict(&archive, c, params.neighbours).map(|p| (p, i)))
            .collect::<Result<_>>()?;
        predicted.sort_by(|a, b| by_fitness_desc(a.0, b.0).then(a.1.cmp(&b.1)));

        let mut error = 0.0;
        let mut fresh = Vec::with_capacity(x);
        for &(prediction, i) in predicted.iter().take(x) {
            let w = candidates[i].clone();
            let f = evaluate(&w);
            error += (prediction - f).abs();
            archive.push(w.clone(), f);
            fresh.push((w, f));
        }

        population.extend(fresh);
        // Stable sort: incumbents precede newcomers on equal fitness.
        population.sort_by(|a, b| by_fitness_desc(a.1, b.1));
        population.truncate(x);

        trace.push(TraceRow {
            iteration,
            best_fitness: best_so_far(&archive),
            prediction_error: error / x as f64,
            evaluations: archive.len(),
        });
    }

    let best_index = archive.best().expect("archive is non-empty");
    let (best, best_fitness) = archive.entries[best_index].clone();
    Ok(LearnOutcome {
        best,
        best_fitness,
        inherited_fitness,
        delta: best_fitness - inherited_fitness,
        evaluations: archive.len(),
        best_index,
        trace,
    })
}
