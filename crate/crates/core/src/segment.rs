//! Character and dictionary-word segmentation.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{Granularity, Segmentation, Token, Upos};

/// Word list with one coarse POS tag per entry.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: HashMap<String, Upos>,
    max_word_len: usize,
}

impl Lexicon {
    /// Parses `word<TAB>UPOS` lines. `#` lines and blank lines are skipped;
    /// the first entry for a repeated word wins.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lex = Lexicon::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (word, tag) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(i + 1, "expected word<TAB>UPOS"))?;
            if word.is_empty() || word.chars().any(char::is_whitespace) {
                return Err(Error::parse(i + 1, format!("bad lexicon word {word:?}")));
            }
            let pos: Upos = tag.trim().parse().map_err(|e: Error| Error::parse(i + 1, e.to_string()))?;
            lex.insert(word, pos);
        }
        Ok(lex)
    }

    pub fn from_entries<'a>(entries: impl IntoIterator<Item = (&'a str, Upos)>) -> Self {
        let mut lex = Lexicon::default();
        for (w, p) in entries {
            lex.insert(w, p);
        }
        lex
    }

    fn insert(&mut self, word: &str, pos: Upos) {
        if word.is_empty() || self.entries.contains_key(word) {
            return;
        }
        self.max_word_len = self.max_word_len.max(word.chars().count());
        self.entries.insert(word.to_string(), pos);
    }

    pub fn get(&self, word: &str) -> Option<Upos> {
        self.entries.get(word).copied()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains_key(word)
    }

    pub fn max_word_len(&self) -> usize {
        self.max_word_len
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// One token per code point; whitespace is skipped.
pub fn segment_chars(text: &str) -> Result<Segmentation> {
    let tokens: Vec<Token> = text
        .chars()
        .enumerate()
        .filter(|(_, c)| !c.is_whitespace())
        .map(|(i, c)| Token { surface: c.to_string(), char_start: i, char_end: i + 1, pos: None })
        .collect();
    if tokens.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(Segmentation { text: text.to_string(), tokens, granularity: Granularity::Character })
}

/// Greedy forward maximum matching over `lex`. Words never span whitespace.
pub fn segment_words(text: &str, lex: &Lexicon) -> Result<Segmentation> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let byte_at = |i: usize| chars.get(i).map(|&(b, _)| b).unwrap_or(text.len());
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].1.is_whitespace() {
            i += 1;
            continue;
        }
        let run_end = (i..chars.len()).find(|&k| chars[k].1.is_whitespace()).unwrap_or(chars.len());
        let longest = lex.max_word_len().min(run_end - i);
        let mut taken = None;
        for len in (2..=longest).rev() {
            let w = &text[byte_at(i)..byte_at(i + len)];
            if let Some(p) = lex.get(w) {
                taken = Some((len, p));
                break;
            }
        }
        let (len, pos) = taken.unwrap_or_else(|| {
            let w = &text[byte_at(i)..byte_at(i + 1)];
            (1, lex.get(w).unwrap_or(Upos::X))
        });
        tokens.push(Token {
            surface: text[byte_at(i)..byte_at(i + len)].to_string(),
            char_start: i,
            char_end: i + len,
            pos: Some(pos),
        });
        i += len;
    }
    if tokens.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(Segmentation { text: text.to_string(), tokens, granularity: Granularity::Word })
}

/// Splits an already segmented line on whitespace. Offsets refer to the
/// whitespace-stripped text.
pub fn parse_presegmented(line: &str) -> Segmentation {
    let parts: Vec<&str> = line.split_whitespace().collect();
    Segmentation::from_surfaces(&parts, Granularity::Word)
}

/// Dispatches on granularity; word granularity needs a lexicon.
pub fn segment(text: &str, granularity: Granularity, lex: &Lexicon) -> Result<Segmentation> {
    match granularity {
        Granularity::Character => segment_chars(text),
        Granularity::Word => segment_words(text, lex),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex(words: &[&str]) -> Lexicon {
        Lexicon::from_entries(words.iter().map(|w| (*w, Upos::Noun)))
    }

    fn surfaces(seg: &Segmentation) -> Vec<&str> {
        seg.surfaces().collect()
    }

    #[test]
    fn chars_one_token_per_code_point() {
        assert_eq!(surfaces(&segment_chars("我以前").unwrap()), ["我", "以", "前"]);
        assert!(matches!(segment_chars(""), Err(Error::EmptyInput)));
        assert!(matches!(segment_chars("  "), Err(Error::EmptyInput)));
    }

    #[test]
    fn chars_keep_original_offsets() {
        let seg = segment_chars("一前 没").unwrap();
        let spans: Vec<(usize, usize)> = seg.tokens.iter().map(|t| (t.char_start, t.char_end)).collect();
        assert_eq!(spans, [(0, 1), (1, 2), (3, 4)]);
    }

    #[test]
    fn words_longest_match() {
        let seg = segment_words("我以前没住过", &lex(&["以前", "住"])).unwrap();
        assert_eq!(surfaces(&seg), ["我", "以前", "没", "住", "过"]);
        let seg = segment_words("欧洲人", &lex(&["欧洲", "欧洲人"])).unwrap();
        assert_eq!(surfaces(&seg), ["欧洲人"]);
    }

    #[test]
    fn unknown_chars_become_x() {
        let seg = segment_words("甲乙", &lex(&[])).unwrap();
        assert_eq!(surfaces(&seg), ["甲", "乙"]);
        assert!(seg.tokens.iter().all(|t| t.pos == Some(Upos::X)));
    }

    #[test]
    fn words_do_not_cross_whitespace() {
        let seg = segment_words("欧 洲", &lex(&["欧洲"])).unwrap();
        assert_eq!(surfaces(&seg), ["欧", "洲"]);
    }

    #[test]
    fn presegmented_lines() {
        let seg = parse_presegmented("另外 ， 冬 阴功 对 外国人 的 喜爱 不断 地 增加 。");
        assert_eq!(seg.len(), 12);
        assert_eq!(parse_presegmented("我").len(), 1);
        assert_eq!(surfaces(&parse_presegmented("我  以前")), ["我", "以前"]);
        assert_eq!(parse_presegmented("我  以前").tokens[1].char_start, 1);
    }

    #[test]
    fn lexicon_parse_errors_carry_line() {
        let err = Lexicon::parse("# c\n好\tADJ\n坏 ADJ\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = Lexicon::parse("好\tADJECTIVE\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let lex = Lexicon::parse("好\tADJ\n好人\tNOUN\n").unwrap();
        assert_eq!(lex.max_word_len(), 2);
        assert_eq!(lex.get("好"), Some(Upos::Adj));
    }
}
