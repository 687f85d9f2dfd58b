//! Low-precision number formats and the mixed-precision datapath.
//!
//! # Bit layouts
//!
//! `Float8` (1-4-3): bit 7 sign, bits 6..3 exponent (bias 7), bits 2..0
//! mantissa. Exponent field 0 encodes subnormals `m * 2^-9`; there are no
//! infinities or NaNs, so all 256 patterns are finite and the largest value is
//! `1.875 * 2^8 = 480`.
//!
//! `Float16` is IEEE binary16 (`half::f16`).
//!
//! `PackedWord` is a 32-bit word holding four `Float8` or two `Float16`
//! lanes, or one `f32`. Lane `k` of a `four_f8` word occupies bits
//! `8k..8k+8`; lane `k` of a `two_f16` word occupies bits `16k..16k+16`
//! (little-endian by lane index). Serialized words are little-endian bytes.
//!
//! All rounding is round-to-nearest, ties-to-even.

mod blocked;
mod float8;
mod mixed_dot;
mod packed;
pub mod reference;

pub use blocked::{
    block_dequantize, block_quantize, Block, BlockElement, BlockedVector, SHARED_EXPONENT_BIAS,
};
pub use float8::{float8_table_csv, Float8, SubnormalMode};
pub use half::f16 as Float16;
pub use mixed_dot::{mixed_dot, mixed_dot_issue_stages, IssueStages};
pub use packed::{pack_f16, pack_f32, pack_f8, unpack_stream, Lanes, PackKind, PackedWord};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LowPrecError {
    #[error("cannot quantize NaN")]
    NaN,
    #[error("non-finite value at index {0}")]
    NonFinite(usize),
    #[error("{kind:?} word takes {expected} lanes, got {got}")]
    Arity {
        kind: PackKind,
        expected: usize,
        got: usize,
    },
    #[error("packed data must be 32-bit aligned, got {0} bytes")]
    Unaligned(usize),
    #[error("vector lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("length {len} is not a multiple of 4*lanes = {issue}")]
    IssueLength { len: usize, issue: usize },
    #[error("lane count {0} is not a power of two")]
    Lanes(usize),
    #[error("mantissa bits must be in 2..=5, got {0}")]
    MantissaBits(u32),
    #[error("block length must be >= 1")]
    BlockLength,
    #[error("malformed blocked vector: {0}")]
    Malformed(String),
}

pub type Result<T, E = LowPrecError> = std::result::Result<T, E>;
