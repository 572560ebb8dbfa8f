#![no_main]

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use zhgec::annotate::Annotator;
use zhgec::ingest::{parse, CorpusFormat};

fuzz_target!(|data: &[u8]| {
    static ANNOTATOR: OnceLock<Annotator> = OnceLock::new();
    let Some((&tag, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let format = if tag & 1 == 0 { CorpusFormat::NlpccTrain } else { CorpusFormat::NlpccSeg };
    let _ = parse(text, format, ANNOTATOR.get_or_init(Annotator::bundled));
});
