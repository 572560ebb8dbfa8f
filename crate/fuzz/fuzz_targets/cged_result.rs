#![no_main]

use libfuzzer_sys::fuzz_target;
use zhgec::score::parse_cged_result;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_cged_result(text);
    }
});
