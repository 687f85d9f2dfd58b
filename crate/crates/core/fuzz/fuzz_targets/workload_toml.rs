#![no_main]

use libfuzzer_sys::fuzz_target;
use loopcell::cli::{parse_workloads, render_workloads};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(rows) = parse_workloads(text) {
        let again = parse_workloads(&render_workloads(&rows)).expect("rendered table parses");
        assert_eq!(again.len(), rows.len());
    }
});
