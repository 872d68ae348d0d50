//! Targeted-locomotion fitness.
//!
//! A run towards target direction `TD` ends at distance `gamma` from the
//! origin, at angle `theta` away from `TD`. Its progress along `TD` is
//! `beta = gamma cos theta`, its lateral miss `alpha = gamma sin theta`,
//! and the fitness rewards progress while penalising deviation and long
//! paths:
//!
//! ```text
//! F = |beta| / (L + eps) * (beta / (theta + 1) - omega * alpha)
//! ```
//!
//! Robots that make less than [`MIN_PROGRESS`] metres of progress score 0.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::report;
use crate::sim::{normalize_angle, Trajectory};

pub const OMEGA: f64 = 0.01;
pub const EPSILON: f64 = 1e-10;
pub const MIN_PROGRESS: f64 = 0.1;

/// The three target directions, 0, 120 and 240 degrees.
pub const TARGET_DIRECTIONS: [f64; 3] = [0.0, 2.0 * PI / 3.0, 4.0 * PI / 3.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitnessComponents {
    pub gamma: f64,
    pub theta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub path_length: f64,
    pub omega: f64,
    pub epsilon: f64,
}

impl FitnessComponents {
    pub fn new(beta: f64, alpha: f64, theta: f64, path_length: f64) -> Self {
        FitnessComponents {
            gamma: beta.hypot(alpha),
            theta,
            alpha,
            beta,
            path_length,
            omega: OMEGA,
            epsilon: EPSILON,
        }
    }
}

/// Angle between the end bearing `delta` and the target direction, in
/// [0, pi].
pub fn deviation_angle(delta: f64, target: f64) -> f64 {
    let d = (normalize_angle(delta) - normalize_angle(target)).abs();
    if d > PI {
        TAU - d
    } else {
        d
    }
}

pub fn fitness_components(tr: &Trajectory, target: f64) -> FitnessComponents {
    let (x, y) = tr.end();
    let gamma = x.hypot(y);
    let theta = deviation_angle(tr.end_bearing, target);
    let sign = if theta < FRAC_PI_2 { 1.0 } else { -1.0 };
    FitnessComponents {
        gamma,
        theta,
        alpha: gamma * theta.sin(),
        beta: sign * (gamma * theta.cos()).abs(),
        path_length: tr.path_length,
        omega: OMEGA,
        epsilon: EPSILON,
    }
}

/// The fitness formula without the minimum-progress rule.
pub fn raw_fitness(c: &FitnessComponents) -> f64 {
    c.beta.abs() / (c.path_length + c.epsilon) * (c.beta / (c.theta + 1.0) - c.omega * c.alpha)
}

pub fn fitness(c: &FitnessComponents) -> f64 {
    if c.beta < MIN_PROGRESS {
        0.0
    } else {
        raw_fitness(c)
    }
}

pub fn aggregate_fitness(per_direction: &[f64; 3]) -> f64 {
    per_direction.iter().sum::<f64>() / 3.0
}

/// One row of the evaluation log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRecord {
    pub robot: u64,
    pub target: f64,
    pub gamma: f64,
    pub theta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub path_length: f64,
    pub fitness: f64,
}

impl EvaluationRecord {
    pub fn new(robot: u64, target: f64, c: &FitnessComponents) -> Self {
        EvaluationRecord {
            robot,
            target,
            gamma: c.gamma,
            theta: c.theta,
            alpha: c.alpha,
            beta: c.beta,
            path_length: c.path_length,
            fitness: fitness(c),
        }
    }
}

/// Appends evaluation records to a CSV log.
pub struct EvaluationLog<W: Write> {
    writer: csv::Writer<W>,
}

impl<W: Write> EvaluationLog<W> {
    pub fn new(out: W) -> Result<Self> {
        let mut writer = report::csv_writer(out, "evaluations")?;
        writer.write_record([
            "robot",
            "target",
            "gamma",
            "theta",
            "alpha",
            "beta",
            "path_length",
            "fitness",
        ])?;
        Ok(EvaluationLog { writer })
    }

    pub fn append(&mut self, record: &EvaluationRecord) -> Result<()> {
        self.writer.serialize(record)?;
        Ok(())
    }

    pub fn into_inner(self) -> Result<W> {
        self.writer
            .into_inner()
            .map_err(|e| crate::error::Error::io("evaluations", e.into_error()))
    }
}
