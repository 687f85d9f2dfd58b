//! Blocked floating point: each block of `block_length` values shares one
//! 5-bit exponent and every element keeps its own sign and magnitude.
//!
//! With shared exponent field `E` and `m` mantissa bits, an element decodes
//! to `±q * 2^(E - 15 - m)` where the magnitude code `q` has `m + 1` bits
//! (an explicit leading bit plus `m` fraction bits), so the block maximum
//! keeps a full `1.m` significand and decodes to at most
//! `2^(E - 15) * (2 - 2^-m)`.
//!
//! `E` is taken from the largest magnitude in the block (`floor(log2 max)`),
//! clamped to the 5-bit range. An all-zero block uses `E = 0`.
//!
//! Byte encoding (used by [`BlockedVector::to_bytes`]): `m: u8`,
//! `block_length: u16 LE`, `len: u32 LE`, then per block one byte holding
//! `E` followed by one byte per element (`bit 7` sign, low `m + 1` bits `q`).

use super::{LowPrecError, Result};

pub const SHARED_EXPONENT_BIAS: i32 = 15;
const MAX_SHARED_EXPONENT: u8 = 31;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockElement {
    pub negative: bool,
    pub magnitude: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub shared_exponent: u8,
    pub elements: Vec<BlockElement>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockedVector {
    mantissa_bits: u32,
    block_length: usize,
    blocks: Vec<Block>,
}

impl BlockedVector {
    pub fn mantissa_bits(&self) -> u32 {
        self.mantissa_bits
    }

    pub fn block_length(&self) -> usize {
        self.block_length
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.elements.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Scale of one magnitude step in block `b`: `2^(E - bias - m)`.
    pub fn step(&self, block: usize) -> f64 {
        let e = self.blocks[block].shared_exponent as i32 - SHARED_EXPONENT_BIAS;
        2f64.powi(e - self.mantissa_bits as i32)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![self.mantissa_bits as u8];
        out.extend((self.block_length as u16).to_le_bytes());
        out.extend((self.len() as u32).to_le_bytes());
        for b in &self.blocks {
            out.push(b.shared_exponent);
            out.extend(
                b.elements
                    .iter()
                    .map(|e| (e.negative as u8) << 7 | e.magnitude),
            );
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let malformed = |msg: &str| LowPrecError::Malformed(msg.to_string());
        if bytes.len() < 7 {
            return Err(malformed("header truncated"));
        }
        let m = bytes[0] as u32;
        check_mantissa(m)?;
        let block_length = u16::from_le_bytes([bytes[1], bytes[2]]) as usize;
        if block_length == 0 {
            return Err(LowPrecError::BlockLength);
        }
        let len = u32::from_le_bytes([bytes[3], bytes[4], bytes[5], bytes[6]]) as usize;
        let n_blocks = len.div_ceil(block_length);
        let expected = 7 + n_blocks + len;
        if bytes.len() != expected {
            return Err(LowPrecError::Malformed(format!(
                "expected {expected} bytes, got {}",
                bytes.len()
            )));
        }
        let max_q = (1u8 << (m + 1)) - 1;
        let mut rest = &bytes[7..];
        let mut blocks = Vec::with_capacity(n_blocks);
        for k in 0..n_blocks {
            let count = block_length.min(len - k * block_length);
            let shared_exponent = rest[0];
            if shared_exponent > MAX_SHARED_EXPONENT {
                return Err(malformed("shared exponent exceeds 5 bits"));
            }
            let elements = rest[1..=count]
                .iter()
                .map(|&byte| {
                    let magnitude = byte & 0x7f;
                    if magnitude > max_q {
                        Err(malformed("element magnitude exceeds mantissa width"))
                    } else {
                        Ok(BlockElement {
                            negative: byte & 0x80 != 0,
                            magnitude,
                        })
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            blocks.push(Block {
                shared_exponent,
                elements,
            });
            rest = &rest[count + 1..];
        }
        Ok(Self {
            mantissa_bits: m,
            block_length,
            blocks,
        })
    }
}

fn check_mantissa(m: u32) -> Result<()> {
    if (2..=5).contains(&m) {
        Ok(())
    } else {
        Err(LowPrecError::MantissaBits(m))
    }
}

pub fn block_quantize(v: &[f64], block_length: usize, mantissa_bits: u32) -> Result<BlockedVector> {
    check_mantissa(mantissa_bits)?;
    if block_length == 0 {
        return Err(LowPrecError::BlockLength);
    }
    if let Some(bad) = v.iter().position(|x| !x.is_finite()) {
        return Err(LowPrecError::NonFinite(bad));
    }
    let m = mantissa_bits as i32;
    let max_q = (1u32 << (m + 1)) - 1;
    let blocks = v
        .chunks(block_length)
        .map(|chunk| {
            let max = chunk.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
            let shared_exponent = if max == 0.0 {
                0
            } else {
                let e = max.log2().floor() as i32;
                // log2 can land one off near exact powers of two
                let e = if 2f64.powi(e) > max {
                    e - 1
                } else if 2f64.powi(e + 1) <= max {
                    e + 1
                } else {
                    e
                };
                (e + SHARED_EXPONENT_BIAS).clamp(0, MAX_SHARED_EXPONENT as i32) as u8
            };
            let step = 2f64.powi(shared_exponent as i32 - SHARED_EXPONENT_BIAS - m);
            let elements = chunk
                .iter()
                .map(|x| {
                    let q = (x.abs() / step).round_ties_even().min(max_q as f64) as u8;
                    BlockElement {
                        negative: x.is_sign_negative() && q != 0,
                        magnitude: q,
                    }
                })
                .collect();
            Block {
                shared_exponent,
                elements,
            }
        })
        .collect();
    Ok(BlockedVector {
        mantissa_bits,
        block_length,
        blocks,
    })
}

pub fn block_dequantize(bv: &BlockedVector) -> Vec<f64> {
    bv.blocks
        .iter()
        .enumerate()
        .flat_map(|(k, b)| {
            let step = bv.step(k);
            b.elements.iter().map(move |e| {
                let mag = e.magnitude as f64 * step;
                if e.negative {
                    -mag
                } else {
                    mag
                }
            })
        })
        .collect()
}
