#![no_main]

use libfuzzer_sys::fuzz_target;
use zhgec::phonosim::{GlyphModel, PinyinLexicon, ShapeParams};
use zhgec::segment::{parse_presegmented, Lexicon};

fuzz_target!(|data: &[u8]| {
    let Some((&tag, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    match tag % 4 {
        0 => drop(PinyinLexicon::parse(text)),
        1 => drop(GlyphModel::parse(text, ShapeParams::default())),
        2 => drop(Lexicon::parse(text)),
        _ => drop(parse_presegmented(text)),
    }
});
