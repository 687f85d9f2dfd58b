use half::f16;

use super::{Float8, LowPrecError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PackKind {
    FourF8,
    TwoF16,
    OneF32,
}

impl PackKind {
    pub fn lanes(self) -> usize {
        match self {
            PackKind::FourF8 => 4,
            PackKind::TwoF16 => 2,
            PackKind::OneF32 => 1,
        }
    }
}

/// Lane values of one packed word.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lanes {
    F8([Float8; 4]),
    F16([f16; 2]),
    F32(f32),
}

/// A 32-bit storage word; values are only addressable as whole words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PackedWord {
    payload: u32,
    kind: PackKind,
}

impl PackedWord {
    pub fn from_raw(payload: u32, kind: PackKind) -> Self {
        Self { payload, kind }
    }

    pub fn payload(self) -> u32 {
        self.payload
    }

    pub fn kind(self) -> PackKind {
        self.kind
    }

    pub fn to_le_bytes(self) -> [u8; 4] {
        self.payload.to_le_bytes()
    }

    pub fn from_le_bytes(bytes: &[u8], kind: PackKind) -> Result<Self> {
        let word: [u8; 4] = bytes
            .try_into()
            .map_err(|_| LowPrecError::Unaligned(bytes.len()))?;
        Ok(Self::from_raw(u32::from_le_bytes(word), kind))
    }

    pub fn unpack(self) -> Lanes {
        let p = self.payload;
        match self.kind {
            PackKind::FourF8 => Lanes::F8(std::array::from_fn(|k| {
                Float8::from_bits((p >> (8 * k)) as u8)
            })),
            PackKind::TwoF16 => Lanes::F16(std::array::from_fn(|k| {
                f16::from_bits((p >> (16 * k)) as u16)
            })),
            PackKind::OneF32 => Lanes::F32(f32::from_bits(p)),
        }
    }
}

pub fn pack_f8(values: &[Float8]) -> Result<PackedWord> {
    if values.len() != 4 {
        return Err(LowPrecError::Arity {
            kind: PackKind::FourF8,
            expected: 4,
            got: values.len(),
        });
    }
    let payload = values
        .iter()
        .enumerate()
        .fold(0u32, |acc, (k, v)| acc | (v.to_bits() as u32) << (8 * k));
    Ok(PackedWord::from_raw(payload, PackKind::FourF8))
}

pub fn pack_f16(values: &[f16]) -> Result<PackedWord> {
    if values.len() != 2 {
        return Err(LowPrecError::Arity {
            kind: PackKind::TwoF16,
            expected: 2,
            got: values.len(),
        });
    }
    let payload = values[0].to_bits() as u32 | (values[1].to_bits() as u32) << 16;
    Ok(PackedWord::from_raw(payload, PackKind::TwoF16))
}

pub fn pack_f32(value: f32) -> PackedWord {
    PackedWord::from_raw(value.to_bits(), PackKind::OneF32)
}

/// Decodes a little-endian byte stream of packed words.
pub fn unpack_stream(bytes: &[u8], kind: PackKind) -> Result<Vec<Lanes>> {
    if !bytes.len().is_multiple_of(4) {
        return Err(LowPrecError::Unaligned(bytes.len()));
    }
    bytes
        .chunks_exact(4)
        .map(|w| PackedWord::from_le_bytes(w, kind).map(PackedWord::unpack))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn four_ones() {
        let w = pack_f8(&[Float8::ONE; 4]).unwrap();
        assert_eq!(w.payload(), 0x3838_3838);
        let Lanes::F8(v) = w.unpack() else { panic!() };
        assert!(v.iter().all(|f| f.to_f64() == 1.0));
    }

    #[test]
    fn halves() {
        let w = pack_f16(&[f16::from_f64(1.5), f16::from_f64(-2.0)]).unwrap();
        assert_eq!(
            w.unpack(),
            Lanes::F16([f16::from_f64(1.5), f16::from_f64(-2.0)])
        );
        // lane 0 in the low half
        assert_eq!(w.payload() & 0xffff, f16::from_f64(1.5).to_bits() as u32);
    }

    #[test]
    fn lane_order_is_little_endian() {
        let vals = [0x01, 0x02, 0x03, 0x04].map(Float8::from_bits);
        let w = pack_f8(&vals).unwrap();
        assert_eq!(w.to_le_bytes(), [1, 2, 3, 4]);
    }

    #[test]
    fn arity_and_alignment_errors() {
        assert!(matches!(
            pack_f8(&[Float8::ONE; 3]),
            Err(LowPrecError::Arity { .. })
        ));
        assert!(matches!(
            pack_f16(&[f16::ONE; 4]),
            Err(LowPrecError::Arity { .. })
        ));
        assert_eq!(
            unpack_stream(&[0; 6], PackKind::FourF8),
            Err(LowPrecError::Unaligned(6))
        );
        assert_eq!(
            PackedWord::from_le_bytes(&[0; 2], PackKind::TwoF16),
            Err(LowPrecError::Unaligned(2))
        );
    }

    proptest! {
        #[test]
        fn payload_round_trip(payload: u32) {
            for kind in [PackKind::FourF8, PackKind::TwoF16, PackKind::OneF32] {
                let w = PackedWord::from_raw(payload, kind);
                let again = match w.unpack() {
                    Lanes::F8(v) => pack_f8(&v).unwrap(),
                    Lanes::F16(v) => pack_f16(&v).unwrap(),
                    Lanes::F32(v) => pack_f32(v),
                };
                prop_assert_eq!(again, w);
            }
        }
    }
}
