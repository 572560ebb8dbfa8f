#![no_main]

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use zhgec::annotate::Annotator;
use zhgec::ingest::{parse_cged, CorpusFormat};

const VARIANTS: [CorpusFormat; 4] =
    [CorpusFormat::Cged2014, CorpusFormat::Cged2015, CorpusFormat::Cged2016Plus, CorpusFormat::Cged2020];

fuzz_target!(|data: &[u8]| {
    static ANNOTATOR: OnceLock<Annotator> = OnceLock::new();
    let Some((&tag, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let annotator = ANNOTATOR.get_or_init(Annotator::bundled);
    let _ = parse_cged(text, VARIANTS[tag as usize % VARIANTS.len()], annotator);
});
