//! Corpus summaries.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::model::{AnnotationRecord, SentencePair};

/// Counts behind the summary table.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CorpusStats {
    pub sentences: usize,
    pub references: usize,
    pub source_chars: usize,
    /// Edits summed over every annotator, and the number of annotator sets.
    pub edits: usize,
    pub edit_sets: usize,
    pub per_type: BTreeMap<String, usize>,
}

impl CorpusStats {
    pub fn from_pairs(pairs: &[SentencePair]) -> Self {
        CorpusStats {
            sentences: pairs.len(),
            references: pairs.iter().map(|p| p.references.len()).sum(),
            source_chars: pairs.iter().map(|p| p.source.chars().filter(|c| !c.is_whitespace()).count()).sum(),
            ..Default::default()
        }
    }

    pub fn from_records(records: &[AnnotationRecord]) -> Self {
        let mut s = CorpusStats { sentences: records.len(), ..Default::default() };
        for r in records {
            let sets = r.edit_sets.len().max(1);
            s.references += sets;
            s.edit_sets += sets;
            s.source_chars += r.source.joined().chars().count();
            for e in r.edit_sets.values().flatten() {
                s.edits += 1;
                *s.per_type.entry(e.label.to_string()).or_default() += 1;
            }
        }
        s
    }

    fn mean(num: usize, den: usize) -> f64 {
        if den == 0 {
            0.0
        } else {
            num as f64 / den as f64
        }
    }

    pub fn references_per_sentence(&self) -> f64 {
        Self::mean(self.references, self.sentences)
    }

    pub fn edits_per_sentence(&self) -> f64 {
        Self::mean(self.edits, self.edit_sets)
    }

    pub fn chars_per_sentence(&self) -> f64 {
        Self::mean(self.source_chars, self.sentences)
    }

    /// `metric<TAB>value` rows; nothing for an empty corpus.
    pub fn render(&self) -> String {
        let mut out = String::new();
        if self.sentences == 0 {
            return out;
        }
        let _ = writeln!(out, "sentences\t{}", self.sentences);
        let _ = writeln!(out, "chars_per_sentence\t{:.3}", self.chars_per_sentence());
        let _ = writeln!(out, "references_per_sentence\t{:.3}", self.references_per_sentence());
        if self.edit_sets > 0 {
            let _ = writeln!(out, "edits_per_sentence\t{:.3}", self.edits_per_sentence());
        }
        let mut types: Vec<(&String, &usize)> = self.per_type.iter().collect();
        types.sort_by(|a, b| b.1.cmp(a.1).then_with(|| a.0.cmp(b.0)));
        for (t, n) in types {
            let _ = writeln!(out, "type[{t}]\t{n}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nlpcc_mean_references() {
        let pairs = vec![
            SentencePair::new("1", "我在家里一个人学习中文。", vec!["我在家里自学中文。".into()], "nlpcc").unwrap(),
            SentencePair::new("1", "她创造的不是画稿。", vec![], "nlpcc").unwrap(),
        ];
        let s = CorpusStats::from_pairs(&pairs);
        assert_eq!(s.references_per_sentence(), 0.5);
        assert!(s.render().contains("references_per_sentence\t0.500\n"));
    }

    #[test]
    fn empty_corpus_renders_nothing() {
        assert_eq!(CorpusStats::from_pairs(&[]).render(), "");
    }
}
