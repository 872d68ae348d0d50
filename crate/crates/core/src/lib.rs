//! Joint evolution of modular robot bodies and CPG brains, optionally with
//! a short lifetime learning phase for each newborn robot.
//!
//! The pipeline: a body CPPN is decoded into a modular [`morphology`], a
//! brain CPPN fills in the weights of a [`cpg`] network with one
//! oscillator per joint, the robot is driven by the [`sim`] surrogate
//! towards a target, and [`fitness`] scores the run. The [`learner`]
//! tunes brain weights within a lifetime, and [`evolution`] runs the
//! outer population loop. [`experiment`] and [`analyze`] wrap it all in
//! on-disk artifacts.

pub mod analyze;
pub mod cpg;
pub mod cppn;
pub mod error;
pub mod evolution;
pub mod experiment;
pub mod fitness;
pub mod genealogy;
pub mod learner;
pub mod morphology;
pub mod report;
pub mod rng;
pub mod sim;

pub use cpg::{BrainWeights, CpgLayout, CpgNetwork};
pub use cppn::{CppnGenome, InnovationTracker};
pub use error::{Error, Result};
pub use evolution::{run_evolution, EvoParams, Evolution, Individual, Mode};
pub use learner::{learn, LearnerParams};
pub use morphology::{compute_descriptors, decode_body, MorphDescriptors, Morphology};
pub use sim::{simulate, SimConfig, Trajectory};
