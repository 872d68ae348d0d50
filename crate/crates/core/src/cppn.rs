//! Compositional pattern producing networks.
//!
//! A [`CppnGenome`] is a feed-forward graph of activation nodes queried at
//! spatial coordinates. The same representation encodes robot bodies
//! (4 inputs, 5 outputs) and the weights of their CPG brains (6 inputs,
//! 1 output). Structural variation follows NEAT conventions: links carry
//! innovation ids handed out by an [`InnovationTracker`] so that
//! crossover can align genes from two parents.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const BODY_INPUTS: usize = 4;
pub const BODY_OUTPUTS: usize = 5;
pub const BRAIN_INPUTS: usize = 6;
pub const BRAIN_OUTPUTS: usize = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Linear,
    Tanh,
    Sine,
    Gaussian,
    Sigmoid,
    Abs,
}

/// Functions a freshly split hidden node may receive.
pub const HIDDEN_ACTIVATIONS: [Activation; 5] = [
    Activation::Sine,
    Activation::Gaussian,
    Activation::Sigmoid,
    Activation::Linear,
    Activation::Abs,
];

impl Activation {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Linear => x,
            Activation::Tanh => x.tanh(),
            Activation::Sine => x.sin(),
            Activation::Gaussian => (-x * x).exp(),
            Activation::Sigmoid => 1.0 / (1.0 + (-x).exp()),
            Activation::Abs => x.abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    Input,
    Output,
    Hidden,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeGene {
    pub id: u32,
    pub kind: NodeKind,
    pub activation: Activation,
    pub bias: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkGene {
    pub source: u32,
    pub target: u32,
    pub weight: f64,
    pub innovation: u64,
    pub enabled: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CppnGenome {
    pub input_count: usize,
    pub output_count: usize,
    pub nodes: Vec<NodeGene>,
    pub links: Vec<LinkGene>,
}

/// Innovation id of a link in the fully connected starting topology.
fn initial_innovation(input: usize, output: usize, output_count: usize) -> u64 {
    (input * output_count + output) as u64
}

impl CppnGenome {
    /// A genome with input and output nodes only and no links.
    pub fn empty(input_count: usize, output_count: usize, output_activation: Activation) -> Self {
        let mut nodes = Vec::with_capacity(input_count + output_count);
        for id in 0..input_count {
            nodes.push(NodeGene {
                id: id as u32,
                kind: NodeKind::Input,
                activation: Activation::Linear,
                bias: 0.0,
            });
        }
        for k in 0..output_count {
            nodes.push(NodeGene {
                id: (input_count + k) as u32,
                kind: NodeKind::Output,
                activation: output_activation,
                bias: 0.0,
            });
        }
        CppnGenome {
            input_count,
            output_count,
            nodes,
            links: Vec::new(),
        }
    }

    /// Minimal random genome: every input linked to every output with a
    /// weight drawn from U[-1, 1], no hidden nodes, tanh outputs.
    pub fn random<R: Rng + ?Sized>(input_count: usize, output_count: usize, rng: &mut R) -> Self {
        let mut genome = Self::empty(input_count, output_count, Activation::Tanh);
        for i in 0..input_count {
            for o in 0..output_count {
                genome.links.push(LinkGene {
                    source: i as u32,
                    target: (input_count + o) as u32,
                    weight: rng.random_range(-1.0..=1.0),
                    innovation: initial_innovation(i, o, output_count),
                    enabled: true,
                });
            }
        }
        genome
    }

    pub fn random_from_seed(input_count: usize, output_count: usize, seed: u64) -> Self {
        Self::random(input_count, output_count, &mut crate::rng::seeded(seed))
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.input_count, self.output_count)
    }

    pub fn output_id(&self, k: usize) -> u32 {
        (self.input_count + k) as u32
    }

    fn index_of(&self) -> HashMap<u32, usize> {
        self.nodes.iter().enumerate().map(|(i, n)| (n.id, i)).collect()
    }

    /// Node indices in topological order, or `None` if the links contain a
    /// cycle or reference unknown nodes.
    fn topological_order(&self) -> Option<Vec<usize>> {
        let index = self.index_of();
        let mut indegree = vec![0usize; self.nodes.len()];
        let mut outgoing: Vec<Vec<usize>> = vec![Vec::new(); self.nodes.len()];
        for link in &self.links {
            let s = *index.get(&link.source)?;
            let t = *index.get(&link.target)?;
            outgoing[s].push(t);
            indegree[t] += 1;
        }
        let mut queue: VecDeque<usize> = (0..self.nodes.len()).filter(|&i| indegree[i] == 0).collect();
        let mut order = Vec::with_capacity(self.nodes.len());
        while let Some(n) = queue.pop_front() {
            order.push(n);
            for &t in &outgoing[n] {
                indegree[t] -= 1;
                if indegree[t] == 0 {
                    queue.push_back(t);
                }
            }
        }
        (order.len() == self.nodes.len()).then_some(order)
    }

    /// Check the structural invariants: fixed input/output layout, unique
    /// node ids and innovations, no dangling link endpoints, acyclic links,
    /// inputs never targeted.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(format!("invalid genome: {msg}")));
        for k in 0..self.input_count + self.output_count {
            let expected = if k < self.input_count {
                NodeKind::Input
            } else {
                NodeKind::Output
            };
            match self.nodes.get(k) {
                Some(n) if n.id as usize == k && n.kind == expected => {}
                _ => return bad(format!("node {k} is not the expected {expected:?} node")),
            }
        }
        if self.nodes[self.input_count + self.output_count..]
            .iter()
            .any(|n| n.kind != NodeKind::Hidden)
        {
            return bad("extra input/output nodes".into());
        }
        let mut ids = HashSet::new();
        if !self.nodes.iter().all(|n| ids.insert(n.id)) {
            return bad("duplicate node id".into());
        }
        let mut innovations = HashSet::new();
        let mut pairs = HashSet::new();
        for link in &self.links {
            if !ids.contains(&link.source) || !ids.contains(&link.target) {
                return bad(format!("link {} has a dangling endpoint", link.innovation));
            }
            if (link.target as usize) < self.input_count {
                return bad(format!("link {} targets an input", link.innovation));
            }
            if !innovations.insert(link.innovation) {
                return bad(format!("duplicate innovation {}", link.innovation));
            }
            if !pairs.insert((link.source, link.target)) {
                return bad(format!("duplicate link {}->{}", link.source, link.target));
            }
        }
        if self.topological_order().is_none() {
            return bad("links contain a cycle".into());
        }
        Ok(())
    }

    pub fn compile(&self) -> CompiledCppn {
        let index = self.index_of();
        let order = self.topological_order().expect("CppnGenome links must form a DAG");
        let mut incoming: Vec<Vec<(usize, f64)>> = vec![Vec::new(); self.nodes.len()];
        for link in self.links.iter().filter(|l| l.enabled) {
            incoming[index[&link.target]].push((index[&link.source], link.weight));
        }
        CompiledCppn {
            input_count: self.input_count,
            output_count: self.output_count,
            order,
            incoming,
            activation: self.nodes.iter().map(|n| n.activation).collect(),
            bias: self.nodes.iter().map(|n| n.bias).collect(),
        }
    }

    /// Feed-forward evaluation.
    pub fn eval(&self, inputs: &[f64]) -> Result<Vec<f64>> {
        self.compile().eval(inputs)
    }
}

/// A genome flattened into evaluation order, for repeated queries.
#[derive(Debug, Clone)]
pub struct CompiledCppn {
    input_count: usize,
    output_count: usize,
    order: Vec<usize>,
    incoming: Vec<Vec<(usize, f64)>>,
    activation: Vec<Activation>,
    bias: Vec<f64>,
}

impl CompiledCppn {
    pub fn eval(&self, inputs: &[f64]) -> Result<Vec<f64>> {
        if inputs.len() != self.input_count {
            return Err(Error::Arity {
                expected: self.input_count,
                actual: inputs.len(),
            });
        }
        let mut value = vec![0.0; self.activation.len()];
        for &n in &self.order {
            if n < self.input_count {
                value[n] = inputs[n];
                continue;
            }
            let sum = self.incoming[n]
                .iter()
                .fold(self.bias[n], |acc, &(s, w)| acc + w * value[s]);
            value[n] = self.activation[n].apply(sum);
        }
        Ok(value[self.input_count..self.input_count + self.output_count].to_vec())
    }
}

/// Hands out innovation ids and hidden node ids for one genome family
/// within a run. The same structural change (same link endpoints, same
/// split link) maps to the same id wherever it occurs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "TrackerRepr", into = "TrackerRepr")]
pub struct InnovationTracker {
    next_innovation: u64,
    next_node: u32,
    links: BTreeMap<(u32, u32), u64>,
    splits: BTreeMap<u64, u32>,
}

#[derive(Serialize, Deserialize)]
struct TrackerRepr {
    next_innovation: u64,
    next_node: u32,
    links: Vec<(u32, u32, u64)>,
    splits: Vec<(u64, u32)>,
}

impl From<TrackerRepr> for InnovationTracker {
    fn from(r: TrackerRepr) -> Self {
        InnovationTracker {
            next_innovation: r.next_innovation,
            next_node: r.next_node,
            links: r.links.into_iter().map(|(s, t, i)| ((s, t), i)).collect(),
            splits: r.splits.into_iter().collect(),
        }
    }
}

impl From<InnovationTracker> for TrackerRepr {
    fn from(t: InnovationTracker) -> Self {
        TrackerRepr {
            next_innovation: t.next_innovation,
            next_node: t.next_node,
            links: t.links.into_iter().map(|((s, t), i)| (s, t, i)).collect(),
            splits: t.splits.into_iter().collect(),
        }
    }
}

impl InnovationTracker {
    /// Tracker aware of the fully connected starting topology produced by
    /// [`CppnGenome::random`].
    pub fn new(input_count: usize, output_count: usize) -> Self {
        let mut links = BTreeMap::new();
        for i in 0..input_count {
            for o in 0..output_count {
                links.insert(
                    (i as u32, (input_count + o) as u32),
                    initial_innovation(i, o, output_count),
                );
            }
        }
        InnovationTracker {
            next_innovation: (input_count * output_count) as u64,
            next_node: (input_count + output_count) as u32,
            links,
            splits: BTreeMap::new(),
        }
    }

    pub fn link(&mut self, source: u32, target: u32) -> u64 {
        let next = &mut self.next_innovation;
        *self.links.entry((source, target)).or_insert_with(|| {
            let id = *next;
            *next += 1;
            id
        })
    }

    fn split(&mut self, innovation: u64) -> u32 {
        let next = &mut self.next_node;
        *self.splits.entry(innovation).or_insert_with(|| {
            let id = *next;
            *next += 1;
            id
        })
    }

    fn fresh_node(&mut self) -> u32 {
        let id = self.next_node;
        self.next_node += 1;
        id
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MutationRates {
    /// Chance that a genome is mutated at all.
    pub probability: f64,
    pub weight: f64,
    pub add_link: f64,
    pub add_node: f64,
    pub weight_sigma: f64,
}

impl Default for MutationRates {
    fn default() -> Self {
        MutationRates {
            probability: 0.8,
            weight: 0.8,
            add_link: 0.1,
            add_node: 0.1,
            weight_sigma: 0.5,
        }
    }
}

impl MutationRates {
    pub fn with_probability(probability: f64) -> Self {
        MutationRates {
            probability,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum MutationKind {
    Weights,
    AddLink,
    AddNode,
}

/// Mutate a copy of `genome`. With probability `rates.probability` exactly
/// one operator is applied; otherwise the copy is returned unchanged.
pub fn mutate<R: Rng + ?Sized>(
    genome: &CppnGenome,
    rng: &mut R,
    rates: &MutationRates,
    tracker: &mut InnovationTracker,
) -> CppnGenome {
    let mut child = genome.clone();
    if !rng.random_bool(rates.probability.clamp(0.0, 1.0)) {
        return child;
    }
    let total = rates.weight + rates.add_link + rates.add_node;
    let roll = rng.random::<f64>() * total;
    let kind = if roll < rates.weight {
        MutationKind::Weights
    } else if roll < rates.weight + rates.add_link {
        MutationKind::AddLink
    } else {
        MutationKind::AddNode
    };
    let applied = match kind {
        MutationKind::Weights => false,
        MutationKind::AddLink => add_link(&mut child, rng, tracker),
        MutationKind::AddNode => add_node(&mut child, rng, tracker),
    };
    // Structural operators with nowhere to act fall back to a weight
    // perturbation, so a mutation roll always changes the genome.
    if !applied {
        perturb_weights(&mut child, rng, rates.weight_sigma);
    }
    child
}

fn perturb_weights<R: Rng + ?Sized>(genome: &mut CppnGenome, rng: &mut R, sigma: f64) {
    let normal = Normal::new(0.0, sigma).expect("weight sigma must be finite and non-negative");
    for link in &mut genome.links {
        link.weight += normal.sample(rng);
    }
    for node in genome.nodes.iter_mut().filter(|n| n.kind != NodeKind::Input) {
        node.bias += normal.sample(rng);
    }
}

/// Whether `to` is reachable from `from` along existing links.
fn reaches(genome: &CppnGenome, from: u32, to: u32) -> bool {
    let mut stack = vec![from];
    let mut seen = HashSet::new();
    while let Some(n) = stack.pop() {
        if n == to {
            return true;
        }
        if seen.insert(n) {
            stack.extend(genome.links.iter().filter(|l| l.source == n).map(|l| l.target));
        }
    }
    false
}

fn add_link<R: Rng + ?Sized>(genome: &mut CppnGenome, rng: &mut R, tracker: &mut InnovationTracker) -> bool {
    let existing: HashSet<(u32, u32)> = genome.links.iter().map(|l| (l.source, l.target)).collect();
    let mut candidates = Vec::new();
    for s in genome.nodes.iter().filter(|n| n.kind != NodeKind::Output) {
        for t in genome.nodes.iter().filter(|n| n.kind != NodeKind::Input) {
            if s.id != t.id && !existing.contains(&(s.id, t.id)) && !reaches(genome, t.id, s.id) {
                candidates.push((s.id, t.id));
            }
        }
    }
    if candidates.is_empty() {
        return false;
    }
    let (source, target) = candidates[rng.random_range(0..candidates.len())];
    genome.links.push(LinkGene {
        source,
        target,
        weight: rng.random_range(-1.0..=1.0),
        innovation: tracker.link(source, target),
        enabled: true,
    });
    true
}

fn add_node<R: Rng + ?Sized>(genome: &mut CppnGenome, rng: &mut R, tracker: &mut InnovationTracker) -> bool {
    let enabled: Vec<usize> = (0..genome.links.len()).filter(|&i| genome.links[i].enabled).collect();
    if enabled.is_empty() {
        return false;
    }
    let link = enabled[rng.random_range(0..enabled.len())];
    let activation = HIDDEN_ACTIVATIONS[rng.random_range(0..HIDDEN_ACTIVATIONS.len())];
    split_link(genome, link, activation, tracker);
    true
}

/// Replace link `index` (s -> t, weight w) by s -> new (weight 1) and
/// new -> t (weight w). The original link is kept but disabled.
pub(crate) fn split_link(
    genome: &mut CppnGenome,
    index: usize,
    activation: Activation,
    tracker: &mut InnovationTracker,
) -> u32 {
    let (source, target, weight, innovation) = {
        let l = &mut genome.links[index];
        l.enabled = false;
        (l.source, l.target, l.weight, l.innovation)
    };
    let mut node = tracker.split(innovation);
    if genome.nodes.iter().any(|n| n.id == node) {
        node = tracker.fresh_node();
    }
    genome.nodes.push(NodeGene {
        id: node,
        kind: NodeKind::Hidden,
        activation,
        bias: 0.0,
    });
    genome.links.push(LinkGene {
        source,
        target: node,
        weight: 1.0,
        innovation: tracker.link(source, node),
        enabled: true,
    });
    genome.links.push(LinkGene {
        source: node,
        target,
        weight,
        innovation: tracker.link(node, target),
        enabled: true,
    });
    node
}

/// Which of the two crossover parents has the higher fitness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fitter {
    A,
    B,
}

/// NEAT crossover. With probability `probability`, links are aligned by
/// innovation id: matching links take their weight from a uniformly chosen
/// parent, disjoint and excess links come from the fitter parent. Otherwise
/// a copy of `a` is returned.
pub fn crossover<R: Rng + ?Sized>(
    a: &CppnGenome,
    b: &CppnGenome,
    fitter: Fitter,
    probability: f64,
    rng: &mut R,
) -> Result<CppnGenome> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch(
            a.input_count,
            a.output_count,
            b.input_count,
            b.output_count,
        ));
    }
    if !rng.random_bool(probability.clamp(0.0, 1.0)) {
        return Ok(a.clone());
    }
    let (best, other) = match fitter {
        Fitter::A => (a, b),
        Fitter::B => (b, a),
    };
    let other_links: HashMap<u64, &LinkGene> = other.links.iter().map(|l| (l.innovation, l)).collect();
    let mut child = best.clone();
    for link in &mut child.links {
        if let Some(m) = other_links.get(&link.innovation) {
            if rng.random_bool(0.5) {
                link.weight = m.weight;
            }
        }
    }
    Ok(child)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn identity_genome() -> CppnGenome {
        let mut g = CppnGenome::empty(1, 1, Activation::Linear);
        g.links.push(LinkGene {
            source: 0,
            target: 1,
            weight: 1.0,
            innovation: 0,
            enabled: true,
        });
        g
    }

    #[test]
    fn identity_pass_through() {
        assert_eq!(identity_genome().eval(&[0.5]).unwrap(), vec![0.5]);
    }

    #[test]
    fn no_links_yields_activation_of_zero() {
        let g = CppnGenome::empty(3, 2, Activation::Tanh);
        assert_eq!(g.eval(&[0.3, -1.0, 2.0]).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn wrong_arity_is_rejected() {
        let g = CppnGenome::random_from_seed(BODY_INPUTS, BODY_OUTPUTS, 1);
        assert!(matches!(
            g.eval(&[1.0, 2.0]),
            Err(Error::Arity { expected: 4, actual: 2 })
        ));
    }

    #[test]
    fn body_genome_has_five_outputs() {
        let g = CppnGenome::random_from_seed(BODY_INPUTS, BODY_OUTPUTS, 3);
        assert_eq!(g.eval(&[1.0, 0.0, 0.0, 1.0]).unwrap().len(), 5);
    }

    #[test]
    fn random_genome_contract() {
        let body = CppnGenome::random_from_seed(4, 5, 7);
        assert_eq!(body.links.len(), 20);
        assert_eq!(body.nodes.len(), 9);
        assert!(body.links.iter().all(|l| (-1.0..=1.0).contains(&l.weight)));
        assert_eq!(body, CppnGenome::random_from_seed(4, 5, 7));
        assert_ne!(body, CppnGenome::random_from_seed(4, 5, 8));
        assert_eq!(CppnGenome::random_from_seed(6, 1, 123).links.len(), 6);
        body.validate().unwrap();
    }

    #[test]
    fn zero_rate_mutation_is_a_no_op() {
        let g = CppnGenome::random_from_seed(4, 5, 1);
        let mut tracker = InnovationTracker::new(4, 5);
        let mut rng = seeded(9);
        for _ in 0..100 {
            assert_eq!(
                mutate(&g, &mut rng, &MutationRates::with_probability(0.0), &mut tracker),
                g
            );
        }
    }

    #[test]
    fn split_follows_neat_convention() {
        let mut g = CppnGenome::random_from_seed(BRAIN_INPUTS, BRAIN_OUTPUTS, 5);
        let mut tracker = InnovationTracker::new(BRAIN_INPUTS, BRAIN_OUTPUTS);
        let probe = [0.3, -0.2, 0.9, 1.0, 0.0, -0.4];
        let before = g.eval(&probe).unwrap()[0];
        let w = g.links[2].weight;
        let node = split_link(&mut g, 2, Activation::Linear, &mut tracker);
        g.validate().unwrap();
        let into = g.links.iter().find(|l| l.target == node).unwrap();
        let out = g.links.iter().find(|l| l.source == node).unwrap();
        assert_eq!(into.weight, 1.0);
        assert_eq!(out.weight, w);
        assert!(!g.links[2].enabled);
        let after = g.eval(&probe).unwrap()[0];
        assert!((after - before).abs() < 1e-12);
    }

    #[test]
    fn repeated_split_in_same_genome_gets_fresh_node() {
        let mut g = CppnGenome::random_from_seed(2, 1, 5);
        let mut tracker = InnovationTracker::new(2, 1);
        let first = split_link(&mut g, 0, Activation::Sine, &mut tracker);
        g.links[0].enabled = true;
        let second = split_link(&mut g, 0, Activation::Sine, &mut tracker);
        assert_ne!(first, second);
        g.validate().unwrap();
    }

    #[test]
    fn same_split_shares_ids_across_genomes() {
        let mut a = CppnGenome::random_from_seed(2, 1, 5);
        let mut b = CppnGenome::random_from_seed(2, 1, 6);
        let mut tracker = InnovationTracker::new(2, 1);
        assert_eq!(
            split_link(&mut a, 1, Activation::Sine, &mut tracker),
            split_link(&mut b, 1, Activation::Abs, &mut tracker)
        );
        let ia: Vec<u64> = a.links.iter().map(|l| l.innovation).collect();
        let ib: Vec<u64> = b.links.iter().map(|l| l.innovation).collect();
        assert_eq!(ia, ib);
    }

    #[test]
    fn mutation_rate_is_binomial() {
        let g = CppnGenome::random_from_seed(4, 5, 1);
        let mut tracker = InnovationTracker::new(4, 5);
        let mut rng = seeded(2024);
        let changed = (0..1000)
            .filter(|_| mutate(&g, &mut rng, &MutationRates::default(), &mut tracker) != g)
            .count();
        assert!((750..=850).contains(&changed), "changed = {changed}");
    }

    #[test]
    fn crossover_rejects_shape_mismatch() {
        let a = CppnGenome::random_from_seed(4, 5, 1);
        let b = CppnGenome::random_from_seed(6, 1, 1);
        assert!(crossover(&a, &b, Fitter::A, 1.0, &mut seeded(0)).is_err());
    }

    #[test]
    fn self_crossover_is_identity() {
        let g = CppnGenome::random_from_seed(6, 1, 11);
        let child = crossover(&g, &g, Fitter::B, 1.0, &mut seeded(3)).unwrap();
        assert_eq!(child, g);
    }

    #[test]
    fn disjoint_parents_inherit_fitter_links() {
        let mut tracker = InnovationTracker::new(2, 1);
        let mut a = CppnGenome::empty(2, 1, Activation::Tanh);
        let mut b = CppnGenome::empty(2, 1, Activation::Tanh);
        for (g, src) in [(&mut a, 0u32), (&mut b, 1u32)] {
            g.links.push(LinkGene {
                source: src,
                target: 2,
                weight: 0.5,
                innovation: tracker.link(src, 2),
                enabled: true,
            });
        }
        let child = crossover(&a, &b, Fitter::A, 1.0, &mut seeded(1)).unwrap();
        assert_eq!(child.links, a.links);
        let child = crossover(&a, &b, Fitter::B, 1.0, &mut seeded(1)).unwrap();
        assert_eq!(child.links, b.links);
    }

    #[test]
    fn matching_links_appear_once_with_a_parent_weight() {
        let a = CppnGenome::random_from_seed(6, 1, 1);
        let b = CppnGenome::random_from_seed(6, 1, 2);
        let child = crossover(&a, &b, Fitter::A, 1.0, &mut seeded(4)).unwrap();
        assert_eq!(child.links.len(), 6);
        for (k, link) in child.links.iter().enumerate() {
            assert!(link.weight == a.links[k].weight || link.weight == b.links[k].weight);
        }
        let mut innovations: Vec<u64> = child.links.iter().map(|l| l.innovation).collect();
        innovations.dedup();
        assert_eq!(innovations.len(), 6);
    }

    #[test]
    fn zero_probability_crossover_copies_a() {
        let a = CppnGenome::random_from_seed(6, 1, 1);
        let b = CppnGenome::random_from_seed(6, 1, 2);
        assert_eq!(crossover(&a, &b, Fitter::B, 0.0, &mut seeded(4)).unwrap(), a);
    }

    #[test]
    fn genome_json_round_trip() {
        let mut tracker = InnovationTracker::new(4, 5);
        let mut g = CppnGenome::random_from_seed(4, 5, 17);
        split_link(&mut g, 3, Activation::Gaussian, &mut tracker);
        let text = serde_json::to_string(&g).unwrap();
        let back: CppnGenome = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
        let t: InnovationTracker = serde_json::from_str(&serde_json::to_string(&tracker).unwrap()).unwrap();
        assert_eq!(t, tracker);
    }
}
