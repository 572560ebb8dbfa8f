#![no_main]

use libfuzzer_sys::fuzz_target;
use zhgec::m2::{parse_m2, write_m2};
use zhgec::model::Dialect;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(records) = parse_m2(text) else { return };
    // Serializer output must always be readable again.
    for dialect in [Dialect::Cherrant, Dialect::Refined] {
        if let Ok(out) = write_m2(&records, dialect) {
            parse_m2(&out).expect("serialized m2 must parse");
        }
    }
});
