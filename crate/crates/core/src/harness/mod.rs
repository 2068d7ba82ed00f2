//! Deadline harness: analytic bounds, sweeps and verification suites.

pub mod deadlines;
pub mod grids;
pub mod sweep;
pub mod verify;

use thiserror::Error;

use crate::label_codec::CodecError;
use crate::schedule_math::ScheduleError;
use crate::sim_engine::SimError;
use crate::tree_model::TreeError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error("config: {0}")]
    Config(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub use sweep::{
    DeadlineReport, DelayMarker, DelaySpec, DstarSpec, Placement, SweepReport, SweepSpec,
};
pub use verify::{Check, Suite};
