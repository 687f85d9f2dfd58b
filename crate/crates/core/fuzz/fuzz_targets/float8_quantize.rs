#![no_main]

use libfuzzer_sys::fuzz_target;
use loopcell::lowprec::{Float8, SubnormalMode};

fuzz_target!(|data: [u8; 8]| {
    let x = f64::from_le_bytes(data);
    for mode in [SubnormalMode::Keep, SubnormalMode::FlushToZero] {
        match Float8::quantize_with(x, mode) {
            Ok(q) => assert!(q.to_f64().abs() <= 480.0),
            Err(_) => assert!(x.is_nan()),
        }
    }
});
