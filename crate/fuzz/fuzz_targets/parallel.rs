#![no_main]

use libfuzzer_sys::fuzz_target;
use zhgec::ingest::{parse_parallel_line, write_parallel};

fuzz_target!(|data: &[u8]| {
    let Ok(line) = std::str::from_utf8(data) else { return };
    let Ok(item) = parse_parallel_line(line) else { return };
    if let Ok(out) = write_parallel([&item.pair]) {
        let again = parse_parallel_line(out.trim_end_matches('\n')).expect("serialized line must parse");
        assert_eq!(again.pair, item.pair);
    }
});
