//! Planar locomotion surrogate.
//!
//! Stands in for a rigid-body simulator. The robot is treated as a
//! differential drive: each control step, the steered joint signals are
//! integrated and every joint's activity is the rate of change of its
//! signal, saturated at one. Mean activity drives the robot forward at up
//! to `thrust` m/s, and the difference between the right and left sides
//! turns it. Joints on the body's centre line count half towards each side.
//!
//! Headings are counter-clockwise from +X. A robot starts at the origin
//! facing its target direction, so rotating the target rotates the whole
//! trajectory.

use std::f64::consts::{PI, TAU};
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::cpg::{apply_steering, BrainWeights, CpgLayout, CpgNetwork, Side};
use crate::error::{Error, Result};
use crate::morphology::Morphology;
use crate::report;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimConfig {
    pub duration: f64,
    pub sample_interval: f64,
    pub control_step: f64,
    pub dt: f64,
    /// Forward speed in m/s at unit activity.
    pub thrust: f64,
    /// Turn rate in rad/s per unit of right-minus-left activity.
    pub turn: f64,
    /// Distance of the target point from the origin, in metres.
    pub target_distance: f64,
    pub steering_exponent: i32,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            duration: 50.0,
            sample_interval: 0.2,
            control_step: 0.2,
            dt: 0.005,
            thrust: 0.05,
            turn: 2.0,
            target_distance: 10.0,
            steering_exponent: crate::cpg::DEFAULT_STEERING_EXPONENT,
        }
    }
}

fn ratio(a: f64, b: f64, what: &str) -> Result<usize> {
    let r = a / b;
    let n = r.round();
    if !(r.is_finite() && n >= 1.0 && (r - n).abs() < 1e-9) {
        return Err(Error::Config(format!("{what} must be a positive integer multiple")));
    }
    Ok(n as usize)
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        self.steps().map(|_| ())
    }

    /// (dt per sample, dt per control step, total dt steps).
    fn steps(&self) -> Result<(usize, usize, usize)> {
        if !(self.dt > 0.0 && self.thrust >= 0.0 && self.turn >= 0.0 && self.target_distance > 0.0) {
            return Err(Error::Config("simulation constants must be positive".into()));
        }
        let sample = ratio(self.sample_interval, self.dt, "sample_interval / dt")?;
        let control = ratio(self.control_step, self.dt, "control_step / dt")?;
        let total = ratio(self.duration, self.dt, "duration / dt")?;
        if total % sample != 0 || total % control != 0 {
            return Err(Error::Config(
                "duration must be a multiple of sample_interval and control_step".into(),
            ));
        }
        Ok((sample, control, total))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub heading: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    /// Sum of all per-step displacements.
    pub path_length: f64,
    /// Direction of the end position seen from the start, in [0, 2pi).
    pub end_bearing: f64,
}

impl Trajectory {
    pub fn end(&self) -> (f64, f64) {
        let s = self.samples.last().expect("trajectory has at least one sample");
        (s.x, s.y)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = report::csv_writer(out, "trajectory")?;
        w.write_record(["t", "x", "y", "heading"])?;
        for s in &self.samples {
            w.serialize((s.t, s.x, s.y, s.heading))?;
        }
        w.flush().map_err(|e| Error::io("trajectory", e))?;
        Ok(())
    }
}

/// Normalize an angle to [0, 2pi).
pub fn normalize_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Wrap an angle to (-pi, pi].
pub fn wrap_pi(a: f64) -> f64 {
    let r = normalize_angle(a);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Motion produced by one control step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepMotion {
    pub left_activity: f64,
    pub right_activity: f64,
    pub speed: f64,
    pub turn_rate: f64,
}

/// One running simulation: controller state plus robot pose.
#[derive(Debug, Clone)]
pub struct Simulator {
    cfg: SimConfig,
    net: CpgNetwork,
    sides: Vec<Side>,
    target: (f64, f64),
    x: f64,
    y: f64,
    heading: f64,
    step_index: usize,
    path_length: f64,
    samples: Vec<Sample>,
    per_sample: usize,
    per_control: usize,
    total: usize,
}

impl Simulator {
    pub fn new(body: &Morphology, brain: &BrainWeights, target_dir: f64, cfg: &SimConfig) -> Result<Self> {
        let (per_sample, per_control, total) = cfg.steps()?;
        let layout = CpgLayout::from_morphology(body);
        let sides = layout.joints.iter().map(|j| j.side).collect();
        let net = CpgNetwork::new(layout, brain)?;
        Ok(Simulator {
            cfg: *cfg,
            net,
            sides,
            target: (
                cfg.target_distance * target_dir.cos(),
                cfg.target_distance * target_dir.sin(),
            ),
            x: 0.0,
            y: 0.0,
            heading: target_dir,
            step_index: 0,
            path_length: 0.0,
            samples: vec![Sample {
                t: 0.0,
                x: 0.0,
                y: 0.0,
                heading: target_dir,
            }],
            per_sample,
            per_control,
            total,
        })
    }

    pub fn heading(&self) -> f64 {
        self.heading
    }

    pub fn position(&self) -> (f64, f64) {
        (self.x, self.y)
    }

    pub fn finished(&self) -> bool {
        self.step_index >= self.total
    }

    /// Error angle between heading and the bearing of the target, in
    /// (-pi, pi]; positive when the target lies to the right.
    pub fn error_angle(&self) -> f64 {
        let bearing = (self.target.1 - self.y).atan2(self.target.0 - self.x);
        wrap_pi(self.heading - bearing)
    }

    fn side_activity(&self, activity: &[f64], side: Side) -> f64 {
        let (mut sum, mut weight) = (0.0, 0.0);
        for (a, s) in activity.iter().zip(&self.sides) {
            let w = match *s {
                Side::Center => 0.5,
                s if s == side => 1.0,
                _ => 0.0,
            };
            sum += w * a;
            weight += w;
        }
        if weight > 0.0 {
            sum / weight
        } else {
            0.0
        }
    }

    /// Run one control step with the given error angle.
    pub fn advance(&mut self, theta: f64) -> StepMotion {
        let n = self.net.joint_count();
        let n_exp = self.cfg.steering_exponent;
        let signal = |net: &CpgNetwork, i: usize, side: Side| apply_steering(net.output(i), theta, side, n_exp);
        let before: Vec<f64> = (0..n).map(|i| signal(&self.net, i, self.sides[i])).collect();
        for _ in 0..self.per_control {
            self.net.step(self.cfg.dt);
        }
        let span = self.per_control as f64 * self.cfg.dt;
        let activity: Vec<f64> = (0..n)
            .map(|i| ((signal(&self.net, i, self.sides[i]) - before[i]).abs() / span).min(1.0))
            .collect();
        let left = self.side_activity(&activity, Side::Left);
        let right = self.side_activity(&activity, Side::Right);
        let motion = StepMotion {
            left_activity: left,
            right_activity: right,
            speed: self.cfg.thrust * (left + right) / 2.0,
            turn_rate: self.cfg.turn * (right - left),
        };
        let dt = self.cfg.dt;
        for _ in 0..self.per_control {
            let mid = self.heading + 0.5 * motion.turn_rate * dt;
            let ds = motion.speed * dt;
            self.x += ds * mid.cos();
            self.y += ds * mid.sin();
            self.heading += motion.turn_rate * dt;
            self.path_length += ds;
            self.step_index += 1;
            if self.step_index.is_multiple_of(self.per_sample) {
                self.samples.push(Sample {
                    t: self.step_index as f64 * dt,
                    x: self.x,
                    y: self.y,
                    heading: self.heading,
                });
            }
        }
        motion
    }

    fn finish(self) -> Trajectory {
        Trajectory {
            samples: self.samples,
            path_length: self.path_length,
            end_bearing: normalize_angle(self.y.atan2(self.x)),
        }
    }

    /// Run to the end, steering towards the target every control step.
    pub fn run(mut self) -> Trajectory {
        while !self.finished() {
            let theta = self.error_angle();
            self.advance(theta);
        }
        self.finish()
    }

    /// Run to the end with the error angle pinned to `theta`.
    pub fn run_holding(mut self, theta: f64) -> Trajectory {
        while !self.finished() {
            self.advance(theta);
        }
        self.finish()
    }
}

pub fn simulate(body: &Morphology, brain: &BrainWeights, target_dir: f64, cfg: &SimConfig) -> Result<Trajectory> {
    Ok(Simulator::new(body, brain, target_dir, cfg)?.run())
}

/// Straight-line distance from first to last sample over elapsed time.
pub fn displacement_velocity(tr: &Trajectory) -> f64 {
    let (Some(a), Some(b)) = (tr.samples.first(), tr.samples.last()) else {
        return 0.0;
    };
    let elapsed = b.t - a.t;
    if elapsed <= 0.0 {
        return 0.0;
    }
    (b.x - a.x).hypot(b.y - a.y) / elapsed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphology::tests::cross_of_hinges;

    fn cross_weights(intra: f64) -> BrainWeights {
        let layout = CpgLayout::from_morphology(&cross_of_hinges());
        let mut w = vec![0.0; layout.dimension()];
        w[..4].fill(intra);
        BrainWeights(w)
    }

    #[test]
    fn config_validation() {
        SimConfig::default().validate().unwrap();
        let bad = SimConfig {
            sample_interval: 0.0123,
            ..SimConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = SimConfig {
            duration: 50.1,
            ..SimConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn zero_brain_stays_put() {
        let tr = simulate(&cross_of_hinges(), &cross_weights(0.0), 0.0, &SimConfig::default()).unwrap();
        assert_eq!(tr.end(), (0.0, 0.0));
        assert_eq!(tr.path_length, 0.0);
        assert_eq!(tr.samples.len(), 251);
        assert_eq!(displacement_velocity(&tr), 0.0);
    }

    #[test]
    fn jointless_body_is_stationary() {
        let tr = simulate(
            &Morphology::core_only(),
            &BrainWeights::default(),
            1.0,
            &SimConfig::default(),
        )
        .unwrap();
        assert_eq!(tr.path_length, 0.0);
        assert!(tr.samples.iter().all(|s| s.x == 0.0 && s.y == 0.0));
    }

    #[test]
    fn balanced_activity_goes_straight() {
        let cfg = SimConfig::default();
        let sim = Simulator::new(&cross_of_hinges(), &cross_weights(0.7), 0.3, &cfg).unwrap();
        let tr = sim.run_holding(0.0);
        let (x, y) = tr.end();
        assert!(tr.path_length > 0.1);
        assert!((tr.path_length - x.hypot(y)).abs() < 1e-6);
        assert!((y.atan2(x) - 0.3).abs() < 1e-9);
        assert!(tr.samples.iter().all(|s| s.heading == 0.3));
    }

    #[test]
    fn attenuating_right_side_turns_right() {
        let cfg = SimConfig::default();
        let mut sim = Simulator::new(&cross_of_hinges(), &cross_weights(0.7), 0.0, &cfg).unwrap();
        let m = sim.advance(PI / 2.0);
        assert!(m.right_activity < m.left_activity);
        assert!(m.turn_rate < 0.0);
        assert!(sim.heading() < 0.0);
    }

    #[test]
    fn samples_every_interval_from_origin() {
        let tr = simulate(&cross_of_hinges(), &cross_weights(0.5), 0.0, &SimConfig::default()).unwrap();
        assert_eq!(
            tr.samples[0],
            Sample {
                t: 0.0,
                x: 0.0,
                y: 0.0,
                heading: 0.0
            }
        );
        for w in tr.samples.windows(2) {
            assert!((w[1].t - w[0].t - 0.2).abs() < 1e-12);
        }
        assert_eq!(tr.samples.last().unwrap().t, 50.0);
    }

    #[test]
    fn displacement_velocity_examples() {
        let straight = Trajectory {
            samples: vec![
                Sample {
                    t: 0.0,
                    x: 0.0,
                    y: 0.0,
                    heading: 0.0,
                },
                Sample {
                    t: 50.0,
                    x: 10.0,
                    y: 0.0,
                    heading: 0.0,
                },
            ],
            path_length: 10.0,
            end_bearing: 0.0,
        };
        assert!((displacement_velocity(&straight) - 0.2).abs() < 1e-15);
        let looped = Trajectory {
            samples: vec![
                Sample {
                    t: 0.0,
                    x: 0.0,
                    y: 0.0,
                    heading: 0.0,
                },
                Sample {
                    t: 25.0,
                    x: 3.0,
                    y: 3.0,
                    heading: 0.0,
                },
                Sample {
                    t: 50.0,
                    x: 0.0,
                    y: 0.0,
                    heading: 0.0,
                },
            ],
            path_length: 8.5,
            end_bearing: 0.0,
        };
        assert_eq!(displacement_velocity(&looped), 0.0);
    }

    #[test]
    fn angle_helpers() {
        assert_eq!(normalize_angle(-0.5 * PI), 1.5 * PI);
        assert_eq!(normalize_angle(TAU), 0.0);
        assert!((wrap_pi(1.5 * PI) + 0.5 * PI).abs() < 1e-15);
        assert_eq!(wrap_pi(PI), PI);
    }

    #[test]
    fn trajectory_csv_has_schema_and_header() {
        let tr = simulate(&cross_of_hinges(), &cross_weights(0.5), 0.0, &SimConfig::default()).unwrap();
        let mut buf = Vec::new();
        tr.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("# schema: trajectory"));
        assert_eq!(lines.next().unwrap(), "t,x,y,heading");
        assert_eq!(lines.count(), 251);
    }
}
