#![no_main]

use libfuzzer_sys::fuzz_target;
use loopcell::mapper::MappingParams;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(p) = text.parse::<MappingParams>() {
        assert_eq!(p.to_string().parse::<MappingParams>().unwrap(), p);
    }
});
