#![no_main]

use libfuzzer_sys::fuzz_target;
use loopcell::rnn::InstanceFile;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(file) = InstanceFile::from_json(text) {
        let _ = file.into_weights();
    }
});
