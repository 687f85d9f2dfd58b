#![no_main]

use libfuzzer_sys::fuzz_target;
use loopcell::lowprec::{block_dequantize, BlockedVector};

fuzz_target!(|data: &[u8]| {
    if let Ok(bv) = BlockedVector::from_bytes(data) {
        assert_eq!(bv.to_bytes(), data);
        assert_eq!(block_dequantize(&bv).len(), bv.len());
    }
});
