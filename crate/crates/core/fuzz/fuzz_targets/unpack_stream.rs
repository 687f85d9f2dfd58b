#![no_main]

use libfuzzer_sys::fuzz_target;
use loopcell::lowprec::{unpack_stream, PackKind};

fuzz_target!(|data: &[u8]| {
    let Some((&tag, bytes)) = data.split_first() else {
        return;
    };
    let kind = [PackKind::FourF8, PackKind::TwoF16, PackKind::OneF32][tag as usize % 3];
    if let Ok(lanes) = unpack_stream(bytes, kind) {
        assert_eq!(lanes.len() * 4, bytes.len());
    }
});
