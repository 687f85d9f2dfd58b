//! Spatial architecture description: grid geometry, PCU SIMD pipeline and
//! PMU scratchpads, plus the closed-form pipeline latency and throughput
//! facts the mapper and simulator build on.

mod config;
mod pipeline;

pub use config::{ArchConfig, PMU_BANKS};
pub use pipeline::{
    folded_tree_schedule, pcu_mac_throughput, reduction_latency, replay_hazards, Hazard, LevelSlot,
    Opcode, PcuPipeline, Precision, TreeSchedule,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ArchError {
    #[error("lane count {0} is not a power of two")]
    Lanes(usize),
    #[error("reduction tree needs at least {required} stage(s), {available} available")]
    InsufficientStages { required: usize, available: usize },
    #[error("invalid architecture config: {0}")]
    Invalid(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("config parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = ArchError> = std::result::Result<T, E>;
