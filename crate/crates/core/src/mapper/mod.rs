//! Instantiates the loop-based RNN design on the grid.
//!
//! A design has `hu` parallel LSTM-1 engines. Engine `e` owns a contiguous
//! block of `ceil(H / hu)` rows. Each engine has one gate group per gate;
//! a gate group holds `ru` MapReduce units of width `rv` over the
//! concatenated `[h | x]` input, a cross-unit reduction tree and a
//! bias + nonlinearity PCU. One more PCU per engine runs the cell update.
//!
//! MapReduce lanes of a gate group are packed contiguously into PCUs of
//! `4 * lanes` 8-bit slots, so a gate group uses
//! `ceil(rv * ru / (4 * lanes))` PCUs.

mod design;
mod layout;
mod params;

pub use design::{
    map_loop_rnn, map_loop_rnn_with, validate, Buffer, BufferKind, ChainModel, Engine, GateGroup,
    MapReduceUnit, MappedDesign, Placement, Resource, Violation,
};
pub use layout::{weight_layout, WeightBlock, WeightLayout};
pub use params::MappingParams;

use thiserror::Error;

use crate::arch::ArchError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error("invalid mapping parameters: {0}")]
    Params(String),
    #[error("loop-based designs require hv = 1, got hv = {0}")]
    VectorizedHidden(usize),
    #[error(transparent)]
    Arch(#[from] ArchError),
    #[error("weights need {required} bytes of scratchpad, {available} available")]
    Capacity { required: usize, available: usize },
}

pub type Result<T, E = MapError> = std::result::Result<T, E>;
