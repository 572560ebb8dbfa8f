//! Bundled lookup tables and the provider bundle handed to the classifier.

use std::sync::{Arc, OnceLock};

use crate::error::Result;
use crate::phonosim::{GlyphModel, PinyinLexicon, ShapeParams, Similarity};
use crate::segment::Lexicon;

const LEXICON_TSV: &str = include_str!("../data/lexicon.tsv");
const PINYIN_TSV: &str = include_str!("../data/pinyin.tsv");
const GLYPH_TSV: &str = include_str!("../data/glyph.tsv");

/// Lexicon, pinyin table and glyph model.
#[derive(Debug, Clone)]
pub struct Resources {
    pub lexicon: Arc<Lexicon>,
    pub pinyin: Arc<PinyinLexicon>,
    pub glyph: Arc<GlyphModel>,
}

impl Resources {
    /// Tables shipped with the crate, parsed once per process.
    pub fn bundled() -> &'static Resources {
        static BUNDLED: OnceLock<Resources> = OnceLock::new();
        BUNDLED.get_or_init(|| Resources {
            lexicon: Arc::new(Lexicon::parse(LEXICON_TSV).expect("bundled lexicon parses")),
            pinyin: Arc::new(PinyinLexicon::parse(PINYIN_TSV).expect("bundled pinyin table parses")),
            glyph: Arc::new(GlyphModel::parse(GLYPH_TSV, ShapeParams::default()).expect("bundled glyph table parses")),
        })
    }

    /// Bundled tables with a different lexicon.
    pub fn with_lexicon_text(text: &str) -> Result<Resources> {
        let mut r = Resources::bundled().clone();
        r.lexicon = Arc::new(Lexicon::parse(text)?);
        Ok(r)
    }

    pub fn glyph_table_text() -> &'static str {
        GLYPH_TSV
    }

    pub fn providers(&self) -> Providers<'_> {
        Providers { pinyin: self.pinyin.as_ref(), shape: self.glyph.as_ref(), lexicon: &self.lexicon }
    }
}

/// Similarity providers and lexicon used by alignment and classification.
#[derive(Clone, Copy)]
pub struct Providers<'a> {
    pub pinyin: &'a dyn Similarity,
    pub shape: &'a dyn Similarity,
    pub lexicon: &'a Lexicon,
}
