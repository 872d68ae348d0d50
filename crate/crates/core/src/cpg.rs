//! Central pattern generator controller.
//!
//! Every active hinge owns an oscillator pair (x, y). Within a pair the
//! weight from y to x is `w` and from x to y is `-w`; between neighbouring
//! joints (grid Manhattan distance at most two) the weight from x_j to x_i
//! is `w_ij` for `i < j` and `-w_ij` the other way round. The resulting
//! linear system is skew-symmetric, so the summed energy of all pairs is
//! conserved by the exact flow.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::cppn::{CppnGenome, BRAIN_INPUTS, BRAIN_OUTPUTS};
use crate::error::{Error, Result};
use crate::morphology::{Cell, Morphology};

pub const INITIAL_STATE: f64 = std::f64::consts::FRAC_1_SQRT_2;
pub const NEIGHBOUR_DISTANCE: i32 = 2;
pub const DEFAULT_STEERING_EXPONENT: i32 = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
    Center,
}

impl Side {
    pub fn of(position: Cell) -> Side {
        match position[0] {
            x if x < 0 => Side::Left,
            x if x > 0 => Side::Right,
            _ => Side::Center,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Joint {
    pub module: usize,
    pub position: Cell,
    pub side: Side,
}

/// Joint set and coupling pairs of a body; fixes the order of
/// [`BrainWeights`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CpgLayout {
    pub joints: Vec<Joint>,
    /// Coupled pairs `(i, j)` with `i < j`, lexicographically ordered.
    pub pairs: Vec<(usize, usize)>,
}

fn manhattan(a: Cell, b: Cell) -> i32 {
    (0..3).map(|k| (a[k] - b[k]).abs()).sum()
}

impl CpgLayout {
    pub fn from_morphology(body: &Morphology) -> Self {
        let joints: Vec<Joint> = body
            .joints()
            .into_iter()
            .map(|module| {
                let position = body.modules[module].position;
                Joint {
                    module,
                    position,
                    side: Side::of(position),
                }
            })
            .collect();
        let mut pairs = Vec::new();
        for i in 0..joints.len() {
            for j in i + 1..joints.len() {
                if manhattan(joints[i].position, joints[j].position) <= NEIGHBOUR_DISTANCE {
                    pairs.push((i, j));
                }
            }
        }
        CpgLayout { joints, pairs }
    }

    pub fn dimension(&self) -> usize {
        self.joints.len() + self.pairs.len()
    }

    /// Labels naming each entry of a [`BrainWeights`] vector.
    pub fn ordering(&self) -> Vec<String> {
        (0..self.joints.len())
            .map(|i| format!("w{i}"))
            .chain(self.pairs.iter().map(|(i, j)| format!("w{i}_{j}")))
            .collect()
    }

    pub fn neighbours(&self, i: usize) -> Vec<usize> {
        self.pairs
            .iter()
            .filter_map(|&(a, b)| match (a == i, b == i) {
                (true, _) => Some(b),
                (_, true) => Some(a),
                _ => None,
            })
            .collect()
    }
}

/// Flat controller parameters: every intra-joint weight followed by every
/// coupling weight in [`CpgLayout::pairs`] order. This is the learner's
/// search space.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BrainWeights(pub Vec<f64>);

impl BrainWeights {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn clamped(mut self) -> Self {
        for w in &mut self.0 {
            *w = w.clamp(-1.0, 1.0);
        }
        self
    }
}

/// On-disk form of a brain: the weights plus the labels of each entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BrainFile {
    pub ordering: Vec<String>,
    pub weights: BrainWeights,
}

/// Query the brain CPPN for every weight of `layout`, clamped to [-1, 1].
pub fn brain_weights(layout: &CpgLayout, brain: &CppnGenome) -> BrainWeights {
    assert_eq!(
        brain.shape(),
        (BRAIN_INPUTS, BRAIN_OUTPUTS),
        "brain genome must have shape (6, 1)"
    );
    let net = brain.compile();
    let query = |a: Cell, b: Cell| {
        let input = [a[0], a[1], a[2], b[0], b[1], b[2]].map(f64::from);
        net.eval(&input).expect("arity checked above")[0].clamp(-1.0, 1.0)
    };
    let intra = layout.joints.iter().map(|j| query(j.position, j.position));
    let coupling = layout
        .pairs
        .iter()
        .map(|&(i, j)| query(layout.joints[i].position, layout.joints[j].position));
    BrainWeights(intra.chain(coupling).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CpgNetwork {
    layout: CpgLayout,
    intra: Vec<f64>,
    /// (i, j, w_ij) with i < j.
    coupling: Vec<(usize, usize, f64)>,
    /// x_0..x_n followed by y_0..y_n.
    state: Vec<f64>,
    scratch: [Vec<f64>; 5],
}

impl CpgNetwork {
    pub fn new(layout: CpgLayout, weights: &BrainWeights) -> Result<Self> {
        if weights.len() != layout.dimension() {
            return Err(Error::LengthMismatch(weights.len(), layout.dimension()));
        }
        let n = layout.joints.len();
        let intra = weights.0[..n].to_vec();
        let coupling = layout
            .pairs
            .iter()
            .zip(&weights.0[n..])
            .map(|(&(i, j), &w)| (i, j, w))
            .collect();
        Ok(CpgNetwork {
            layout,
            intra,
            coupling,
            state: vec![INITIAL_STATE; 2 * n],
            scratch: std::array::from_fn(|_| vec![0.0; 2 * n]),
        })
    }

    pub fn layout(&self) -> &CpgLayout {
        &self.layout
    }

    pub fn joint_count(&self) -> usize {
        self.intra.len()
    }

    pub fn weights(&self) -> BrainWeights {
        BrainWeights(
            self.intra
                .iter()
                .copied()
                .chain(self.coupling.iter().map(|c| c.2))
                .collect(),
        )
    }

    pub fn state(&self, i: usize) -> (f64, f64) {
        (self.state[i], self.state[self.joint_count() + i])
    }

    pub fn set_state(&mut self, i: usize, x: f64, y: f64) {
        let n = self.joint_count();
        self.state[i] = x;
        self.state[n + i] = y;
    }

    pub fn reset(&mut self) {
        self.state.fill(INITIAL_STATE);
    }

    pub fn energy(&self) -> f64 {
        self.state.iter().map(|v| v * v).sum()
    }

    /// Full 2n x 2n weight matrix over the state vector (x_0..x_n, y_0..y_n),
    /// where entry (r, c) is the weight from state c into state r.
    pub fn weight_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.joint_count();
        let mut m = vec![vec![0.0; 2 * n]; 2 * n];
        for (i, &w) in self.intra.iter().enumerate() {
            m[i][n + i] = w;
            m[n + i][i] = -w;
        }
        for &(i, j, w) in &self.coupling {
            m[i][j] = w;
            m[j][i] = -w;
        }
        m
    }

    fn derivative(intra: &[f64], coupling: &[(usize, usize, f64)], s: &[f64], ds: &mut [f64]) {
        let n = intra.len();
        for (i, &w) in intra.iter().enumerate() {
            ds[i] = w * s[n + i];
            ds[n + i] = -w * s[i];
        }
        for &(i, j, w) in coupling {
            ds[i] += w * s[j];
            ds[j] -= w * s[i];
        }
    }

    /// Advance all oscillators by one classical Runge-Kutta step.
    pub fn step(&mut self, dt: f64) {
        if self.state.is_empty() {
            return;
        }
        let [k1, k2, k3, k4, tmp] = &mut self.scratch;
        let s = &mut self.state;
        let (intra, coupling) = (&self.intra, &self.coupling);
        Self::derivative(intra, coupling, s, k1);
        for ((t, v), k) in tmp.iter_mut().zip(s.iter()).zip(k1.iter()) {
            *t = v + 0.5 * dt * k;
        }
        Self::derivative(intra, coupling, tmp, k2);
        for ((t, v), k) in tmp.iter_mut().zip(s.iter()).zip(k2.iter()) {
            *t = v + 0.5 * dt * k;
        }
        Self::derivative(intra, coupling, tmp, k3);
        for ((t, v), k) in tmp.iter_mut().zip(s.iter()).zip(k3.iter()) {
            *t = v + dt * k;
        }
        Self::derivative(intra, coupling, tmp, k4);
        for (i, v) in s.iter_mut().enumerate() {
            *v += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }

    /// Unsteered output of joint `i`.
    pub fn output(&self, i: usize) -> f64 {
        output_signal(self.state[i])
    }
}

/// Build the controller of `body` from a brain genome, with all oscillators
/// at their initial state.
pub fn build_cpg(body: &Morphology, brain: &CppnGenome) -> CpgNetwork {
    let layout = CpgLayout::from_morphology(body);
    let weights = brain_weights(&layout, brain);
    CpgNetwork::new(layout, &weights).expect("weights generated for this layout")
}

/// `2 / (1 + e^{-2x}) - 1`, i.e. tanh.
pub fn output_signal(x: f64) -> f64 {
    2.0 / (1.0 + (-2.0 * x).exp()) - 1.0
}

/// Slow-down factor `((pi - |theta|) / pi)^n`.
pub fn steering_gain(theta: f64, n: i32) -> f64 {
    ((PI - theta.abs()) / PI).max(0.0).powi(n)
}

/// Attenuate the joints on the side the robot should turn towards.
/// Negative `theta` means the target lies to the left.
pub fn apply_steering(out: f64, theta: f64, side: Side, n: i32) -> f64 {
    match side {
        Side::Left if theta < 0.0 => steering_gain(theta, n) * out,
        Side::Right if theta >= 0.0 => steering_gain(theta, n) * out,
        _ => out,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cppn::Activation;
    use crate::morphology::tests::cross_of_hinges;
    use crate::morphology::{Face, ModuleKind, Rotation};

    fn single(w: f64) -> CpgNetwork {
        let layout = CpgLayout {
            joints: vec![Joint {
                module: 1,
                position: [0, 1, 0],
                side: Side::Center,
            }],
            pairs: vec![],
        };
        CpgNetwork::new(layout, &BrainWeights(vec![w])).unwrap()
    }

    #[test]
    fn single_oscillator_matches_closed_form() {
        let mut net = single(1.0);
        let dt = 0.005;
        let steps = (PI / 4.0 / dt).round() as usize;
        for _ in 0..steps {
            net.step(dt);
        }
        let t = steps as f64 * dt;
        assert!((net.state(0).0 - (t + PI / 4.0).sin()).abs() < 1e-9);
        assert!((net.state(0).0 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn zero_weights_freeze_state() {
        let mut net = build_cpg(&cross_of_hinges(), &CppnGenome::empty(6, 1, Activation::Tanh));
        assert_eq!(net.weights().0, vec![0.0; net.layout().dimension()]);
        for _ in 0..100 {
            net.step(0.2);
        }
        for i in 0..net.joint_count() {
            assert_eq!(net.state(i), (INITIAL_STATE, INITIAL_STATE));
        }
    }

    #[test]
    fn initial_state_is_unit_amplitude() {
        let net = single(0.3);
        assert!((net.state(0).0 - INITIAL_STATE).abs() < 1e-12);
        assert!((net.energy() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn neighbour_rule_uses_manhattan_two() {
        // Hinges at (0,1,0), (0,-1,0), (-1,0,0), (1,0,0): opposite arms are
        // two apart, adjacent arms too; all six pairs couple.
        let layout = CpgLayout::from_morphology(&cross_of_hinges());
        assert_eq!(layout.joints.len(), 4);
        assert_eq!(layout.pairs.len(), 6);

        let mut body = Morphology::core_only();
        let b = body.attach(0, Face::Front, ModuleKind::Brick, Rotation::Deg0).unwrap();
        body.attach(b, Face::Front, ModuleKind::ActiveHinge, Rotation::Deg0)
            .unwrap();
        body.attach(0, Face::Back, ModuleKind::ActiveHinge, Rotation::Deg0)
            .unwrap();
        let layout = CpgLayout::from_morphology(&body);
        assert_eq!(manhattan(layout.joints[0].position, layout.joints[1].position), 3);
        assert!(layout.pairs.is_empty());
        assert_eq!(layout.ordering(), vec!["w0", "w1"]);
    }

    #[test]
    fn weight_matrix_is_skew_symmetric() {
        let brain = CppnGenome::random_from_seed(6, 1, 21);
        let net = build_cpg(&cross_of_hinges(), &brain);
        let m = net.weight_matrix();
        #[allow(clippy::needless_range_loop)]
        for r in 0..m.len() {
            for c in 0..m.len() {
                assert_eq!(m[r][c], -m[c][r]);
            }
        }
        assert!(net.weights().0.iter().all(|w| (-1.0..=1.0).contains(w)));
    }

    #[test]
    fn lower_index_coordinates_come_first() {
        // A brain reading only the first coordinate triple's x.
        let mut brain = CppnGenome::empty(6, 1, Activation::Linear);
        brain.links.push(crate::cppn::LinkGene {
            source: 0,
            target: 6,
            weight: 0.25,
            innovation: 0,
            enabled: true,
        });
        let net = build_cpg(&cross_of_hinges(), &brain);
        let layout = net.layout().clone();
        let w = net.weights();
        for (k, &(i, _)) in layout.pairs.iter().enumerate() {
            let expected = 0.25 * layout.joints[i].position[0] as f64;
            assert_eq!(w.0[layout.joints.len() + k], expected);
        }
    }

    #[test]
    fn wrong_weight_count_is_rejected() {
        let layout = CpgLayout::from_morphology(&cross_of_hinges());
        assert!(CpgNetwork::new(layout, &BrainWeights(vec![0.1; 3])).is_err());
    }

    #[test]
    fn output_signal_examples() {
        assert_eq!(output_signal(0.0), 0.0);
        assert!((output_signal(5.0) - 0.9999).abs() < 1e-4);
        for x in [0.1, 0.7, 1.3, 4.0] {
            assert!((output_signal(-x) + output_signal(x)).abs() < 1e-15);
            assert!((output_signal(x) - x.tanh()).abs() < 1e-15);
        }
    }

    #[test]
    fn steering_examples() {
        assert_eq!(steering_gain(0.0, 7), 1.0);
        assert_eq!(steering_gain(PI, 7), 0.0);
        assert_eq!(steering_gain(-PI, 7), 0.0);
        assert_eq!(steering_gain(PI / 2.0, 7), 0.0078125);
        assert_eq!(apply_steering(0.8, -PI / 2.0, Side::Left, 7), 0.00625);
        assert_eq!(apply_steering(0.8, -PI / 2.0, Side::Right, 7), 0.8);
        assert_eq!(apply_steering(0.8, PI / 2.0, Side::Right, 7), 0.00625);
        assert_eq!(apply_steering(0.8, PI / 2.0, Side::Center, 7), 0.8);
        for side in [Side::Left, Side::Right, Side::Center] {
            assert_eq!(apply_steering(-0.3, 0.0, side, 7), -0.3);
        }
    }

    #[test]
    fn brain_file_json() {
        let layout = CpgLayout::from_morphology(&cross_of_hinges());
        let file = BrainFile {
            ordering: layout.ordering(),
            weights: BrainWeights(vec![0.5; layout.dimension()]),
        };
        let text = serde_json::to_string(&file).unwrap();
        assert!(text.contains("\"weights\":[0.5,"));
        assert_eq!(serde_json::from_str::<BrainFile>(&text).unwrap(), file);
    }
}
