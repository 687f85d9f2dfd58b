use std::fmt::Write as _;

use super::{LowPrecError, Result};

const EXP_BIAS: i32 = 7;
const MANT_BITS: u32 = 3;
const MAX_FINITE: f64 = 480.0;

/// 8-bit float, sign / 4-bit exponent / 3-bit mantissa, bias 7.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Float8(u8);

/// Handling of values below the smallest normal (`2^-6`) when quantizing.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum SubnormalMode {
    #[default]
    Keep,
    FlushToZero,
}

impl Float8 {
    pub const MAX: Float8 = Float8(0x7f);
    pub const ONE: Float8 = Float8(0x38);
    pub const ZERO: Float8 = Float8(0x00);

    pub const fn from_bits(bits: u8) -> Self {
        Float8(bits)
    }

    pub const fn to_bits(self) -> u8 {
        self.0
    }

    pub fn is_sign_negative(self) -> bool {
        self.0 & 0x80 != 0
    }

    pub fn to_f64(self) -> f64 {
        let exp = ((self.0 >> MANT_BITS) & 0x0f) as i32;
        let mant = (self.0 & 0x07) as f64;
        let mag = if exp == 0 {
            mant * 2f64.powi(1 - EXP_BIAS - MANT_BITS as i32)
        } else {
            (1.0 + mant / 8.0) * 2f64.powi(exp - EXP_BIAS)
        };
        if self.is_sign_negative() {
            -mag
        } else {
            mag
        }
    }

    pub fn to_f32(self) -> f32 {
        self.to_f64() as f32
    }

    /// Nearest representable value, ties to even mantissa. Magnitudes past
    /// the largest finite value (including infinities) saturate.
    pub fn quantize(x: f64) -> Result<Self> {
        Self::quantize_with(x, SubnormalMode::Keep)
    }

    pub fn quantize_with(x: f64, mode: SubnormalMode) -> Result<Self> {
        if x.is_nan() {
            return Err(LowPrecError::NaN);
        }
        let sign = if x.is_sign_negative() { 0x80u8 } else { 0 };
        let a = x.abs();
        if a >= MAX_FINITE {
            return Ok(Float8(sign | Self::MAX.0));
        }
        let min_normal = 2f64.powi(1 - EXP_BIAS);
        if a < min_normal {
            if mode == SubnormalMode::FlushToZero {
                return Ok(Float8(sign));
            }
            let quantum = 2f64.powi(1 - EXP_BIAS - MANT_BITS as i32);
            // q == 8 lands exactly on the smallest normal encoding
            let q = (a / quantum).round_ties_even() as u8;
            return Ok(Float8(sign | q));
        }
        let e = ((a.to_bits() >> 52) & 0x7ff) as i32 - 1023;
        let quantum = 2f64.powi(e - MANT_BITS as i32);
        let mut q = (a / quantum).round_ties_even() as u32;
        let mut biased = e + EXP_BIAS;
        if q == 16 {
            q = 8;
            biased += 1;
        }
        if biased > 15 {
            return Ok(Float8(sign | Self::MAX.0));
        }
        Ok(Float8(sign | ((biased as u8) << MANT_BITS) | (q - 8) as u8))
    }

    pub fn all() -> impl Iterator<Item = Float8> {
        (0..=255u8).map(Float8)
    }
}

/// The 256-entry decode table as CSV (`encoding,bits,decoded`).
pub fn float8_table_csv() -> String {
    let mut out = String::from("encoding,bits,decoded\n");
    for f in Float8::all() {
        writeln!(
            out,
            "0x{:02x},{:08b},{:?}",
            f.to_bits(),
            f.to_bits(),
            f.to_f64()
        )
        .unwrap();
    }
    out
}
