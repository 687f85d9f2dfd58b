//! Modeling toolkit for loop-based RNN serving on a coarse-grained spatial
//! accelerator.
//!
//! - [`rnn`]: golden LSTM/GRU cells, per-element LSTM-1 decomposition, FLOP accounting.
//! - [`lowprec`]: 8/16-bit float formats, packed 32-bit words, the mixed-precision
//!   dot-product datapath and the blocked shared-exponent format.
//! - [`arch`]: grid/PCU/PMU configuration and the closed-form pipeline facts.
//! - [`mapper`]: instantiates a loop-based design and lays out its weights.
//! - [`sim`]: cycle cost model for loop-based designs and the tiled MVM baseline.
//! - [`dse`]: exhaustive search over the mapping parameters.
//! - [`cli`]: workload table and the command-line front end.

pub mod arch;
pub mod cli;
pub mod dse;
pub mod lowprec;
pub mod mapper;
pub mod rnn;
pub mod sim;
