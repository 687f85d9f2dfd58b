//! Full-precision functional model of LSTM and GRU cells.
//!
//! Everything here is the golden reference for the rest of the crate. Cells
//! are generic over [`Real`] so the same code runs in `f64` (the reference
//! precision) and `f32` (parity experiments).
//!
//! Gate order is fixed: LSTM gates are `(i, j, f, o)`, GRU gates are
//! `(r, z, n)`. Weights are held as separate hidden (`H x H`) and input
//! (`H x D`) matrices per gate; the loop-based path reads them as one
//! concatenated `H x R` row `[W_h | W_x]` against the input `[h | x]`.

mod cell;
mod dims;
mod instance;
pub mod reference;
mod weights;

pub use cell::{
    gru_cell_step, lstm1, lstm_cell_step, lstm_cell_step_with_gates, run_sequence, sigmoid,
    CellState, GateActivations,
};
pub use dims::{flop_count, CellDims, CellKind};
pub use instance::{gate_names, random_instance, Instance, InstanceFile};
pub use weights::{CellWeights, Matrix};

use num_traits::Float;
use thiserror::Error;

/// Scalar type accepted by the golden model.
pub trait Real: Float + std::fmt::Debug + Send + Sync + 'static {}

impl Real for f32 {}
impl Real for f64 {}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RnnError {
    #[error("invalid dimensions: {0}")]
    InvalidDims(String),
    #[error("shape mismatch for {what}: expected {expected}, got {got}")]
    Shape {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("row {row} out of range for hidden size {hidden}")]
    RowOutOfRange { row: usize, hidden: usize },
    #[error("input sequence is empty")]
    EmptySequence,
    #[error("expected {expected:?} weights, got {got:?}")]
    WrongKind { expected: CellKind, got: CellKind },
    #[error("instance file: {0}")]
    Format(String),
}

pub type Result<T, E = RnnError> = std::result::Result<T, E>;
