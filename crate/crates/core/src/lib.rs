//! Simulation of deterministic two-agent rendezvous on infinite trees.
//!
//! Agents are anonymous apart from their labels, move synchronously, and may
//! wake at different rounds. The crate provides the tree models, label
//! encodings, schedule arithmetic, the agent algorithms, a round-exact
//! simulator and a harness that checks meeting times against analytic
//! deadlines.

pub mod agent_programs;
pub mod harness;
pub mod label_codec;
pub mod schedule_math;
pub mod sim_engine;
pub mod tree_model;

pub use agent_programs::{Algorithm, AlgorithmKind, Variant};
pub use label_codec::{BitString, Label};
pub use sim_engine::{run, Scenario, SimOutcome};
pub use tree_model::{DegreeGen, LabelingMode, NodeRef, TreeModel};
