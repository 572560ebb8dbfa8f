//! Domain types shared by every module.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Granularity {
    Character,
    Word,
}

impl fmt::Display for Granularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Granularity::Character => "char",
            Granularity::Word => "word",
        })
    }
}

impl FromStr for Granularity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "char" | "character" => Ok(Granularity::Character),
            "word" => Ok(Granularity::Word),
            other => Err(Error::InvalidLabel(format!("unknown granularity {other:?}"))),
        }
    }
}

/// Universal POS tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Upos {
    Adj,
    Adp,
    Adv,
    Aux,
    Cconj,
    Det,
    Intj,
    Noun,
    Num,
    Part,
    Pron,
    Propn,
    Punct,
    Sconj,
    Sym,
    Verb,
    X,
}

impl Upos {
    pub const ALL: [Upos; 17] = [
        Upos::Adj,
        Upos::Adp,
        Upos::Adv,
        Upos::Aux,
        Upos::Cconj,
        Upos::Det,
        Upos::Intj,
        Upos::Noun,
        Upos::Num,
        Upos::Part,
        Upos::Pron,
        Upos::Propn,
        Upos::Punct,
        Upos::Sconj,
        Upos::Sym,
        Upos::Verb,
        Upos::X,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Upos::Adj => "ADJ",
            Upos::Adp => "ADP",
            Upos::Adv => "ADV",
            Upos::Aux => "AUX",
            Upos::Cconj => "CCONJ",
            Upos::Det => "DET",
            Upos::Intj => "INTJ",
            Upos::Noun => "NOUN",
            Upos::Num => "NUM",
            Upos::Part => "PART",
            Upos::Pron => "PRON",
            Upos::Propn => "PROPN",
            Upos::Punct => "PUNCT",
            Upos::Sconj => "SCONJ",
            Upos::Sym => "SYM",
            Upos::Verb => "VERB",
            Upos::X => "X",
        }
    }
}

impl FromStr for Upos {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Upos::ALL
            .into_iter()
            .find(|u| u.as_str() == s)
            .ok_or_else(|| Error::InvalidLabel(format!("unknown UPOS tag {s:?}")))
    }
}

impl fmt::Display for Upos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub surface: String,
    pub char_start: usize,
    pub char_end: usize,
    pub pos: Option<Upos>,
}

/// A tokenized sentence. `text` is the string the char offsets refer to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segmentation {
    pub text: String,
    pub tokens: Vec<Token>,
    pub granularity: Granularity,
}

impl Segmentation {
    /// Builds a segmentation from bare surfaces laid end to end.
    pub fn from_surfaces<S: AsRef<str>>(surfaces: &[S], granularity: Granularity) -> Self {
        let mut text = String::new();
        let mut tokens = Vec::with_capacity(surfaces.len());
        let mut at = 0;
        for s in surfaces {
            let s = s.as_ref();
            let n = s.chars().count();
            text.push_str(s);
            tokens.push(Token { surface: s.to_string(), char_start: at, char_end: at + n, pos: None });
            at += n;
        }
        Segmentation { text, tokens, granularity }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn surfaces(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.surface.as_str())
    }

    /// Surfaces of `start..end` concatenated without separators.
    pub fn span_text(&self, start: usize, end: usize) -> String {
        self.tokens[start..end].iter().map(|t| t.surface.as_str()).collect()
    }

    /// Surfaces of `start..end` joined by single spaces, as in m2 files.
    pub fn span_m2(&self, start: usize, end: usize) -> String {
        let parts: Vec<&str> = self.tokens[start..end].iter().map(|t| t.surface.as_str()).collect();
        parts.join(" ")
    }

    /// Token surfaces joined without separators.
    pub fn joined(&self) -> String {
        self.span_text(0, self.tokens.len())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Op {
    R,
    M,
    U,
    WO,
}

impl Op {
    pub fn as_str(self) -> &'static str {
        match self {
            Op::R => "R",
            Op::M => "M",
            Op::U => "U",
            Op::WO => "WO",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subtype {
    Pinyin,
    Shape,
    Multi,
    De,
    Co,
    Spell,
    Other,
    Pos(Upos),
}

impl Subtype {
    pub fn as_str(self) -> &'static str {
        match self {
            Subtype::Pinyin => "PINYIN",
            Subtype::Shape => "SHAPE",
            Subtype::Multi => "MULTI",
            Subtype::De => "DE",
            Subtype::Co => "CO",
            Subtype::Spell => "SPELL",
            Subtype::Other => "OTHER",
            Subtype::Pos(u) => u.as_str(),
        }
    }
}

impl FromStr for Subtype {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "PINYIN" => Subtype::Pinyin,
            "SHAPE" => Subtype::Shape,
            "MULTI" => Subtype::Multi,
            "DE" => Subtype::De,
            "CO" => Subtype::Co,
            "SPELL" => Subtype::Spell,
            "OTHER" => Subtype::Other,
            other => Subtype::Pos(other.parse()?),
        })
    }
}

/// Operation class plus optional subtype, e.g. `R:PINYIN`, `M:DE`, `WO`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ErrorLabel {
    op: Op,
    subtype: Option<Subtype>,
}

impl ErrorLabel {
    pub fn new(op: Op, subtype: Option<Subtype>) -> Result<Self> {
        let ok = match (op, subtype) {
            (Op::WO, None) => true,
            (Op::WO, Some(_)) => false,
            (_, Some(Subtype::Pinyin | Subtype::Shape | Subtype::Multi | Subtype::Co)) => op == Op::R,
            (_, Some(Subtype::De)) => matches!(op, Op::R | Op::M),
            _ => true,
        };
        if ok {
            Ok(ErrorLabel { op, subtype })
        } else {
            let sub = subtype.map(Subtype::as_str).unwrap_or("");
            Err(Error::InvalidLabel(format!("{}:{sub} is not a permitted combination", op.as_str())))
        }
    }

    pub(crate) fn of(op: Op, subtype: Subtype) -> Self {
        ErrorLabel::new(op, Some(subtype)).expect("label combination checked by caller")
    }

    pub fn word_order() -> Self {
        ErrorLabel { op: Op::WO, subtype: None }
    }

    pub fn op(&self) -> Op {
        self.op
    }

    pub fn subtype(&self) -> Option<Subtype> {
        self.subtype
    }
}

impl fmt::Display for ErrorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.subtype {
            Some(s) => write!(f, "{}:{}", self.op.as_str(), s.as_str()),
            None => f.write_str(self.op.as_str()),
        }
    }
}

impl FromStr for ErrorLabel {
    type Err = Error;

    /// Parses the refined spelling (`R:PINYIN`, `U:PART`, `WO`).
    fn from_str(s: &str) -> Result<Self> {
        let (op, sub) = match s.split_once(':') {
            Some((o, rest)) => (o, Some(rest)),
            None => (s, None),
        };
        let op = match op {
            "R" => Op::R,
            "M" => Op::M,
            "U" => Op::U,
            "WO" => Op::WO,
            other => return Err(Error::InvalidLabel(format!("unknown operation {other:?}"))),
        };
        let sub = sub.map(str::parse).transpose()?;
        ErrorLabel::new(op, sub)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EditLabel {
    Unclassified,
    Typed(ErrorLabel),
    /// A type string this toolkit does not model, kept verbatim.
    Opaque(String),
}

impl EditLabel {
    pub fn typed(&self) -> Option<ErrorLabel> {
        match self {
            EditLabel::Typed(l) => Some(*l),
            _ => None,
        }
    }
}

impl fmt::Display for EditLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EditLabel::Unclassified => f.write_str("?"),
            EditLabel::Typed(l) => l.fmt(f),
            EditLabel::Opaque(s) => f.write_str(s),
        }
    }
}

/// A span replacement over source tokens. `start == end` is an insertion.
///
/// `replacement` uses the m2 spelling: target tokens separated by spaces.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edit {
    pub start: usize,
    pub end: usize,
    pub replacement: String,
    pub label: EditLabel,
    pub annotator: usize,
}

impl Edit {
    pub fn new(start: usize, end: usize, replacement: impl Into<String>) -> Result<Self> {
        let replacement = replacement.into();
        if start > end {
            return Err(Error::InvalidEdit(format!("start {start} after end {end}")));
        }
        if start == end && replacement.trim().is_empty() {
            return Err(Error::InvalidEdit(format!("empty insertion at {start}")));
        }
        Ok(Edit { start, end, replacement, label: EditLabel::Unclassified, annotator: 0 })
    }

    pub fn labeled(start: usize, end: usize, replacement: impl Into<String>, label: ErrorLabel) -> Result<Self> {
        Edit::new(start, end, replacement)?.with_label(EditLabel::Typed(label))
    }

    pub fn with_label(mut self, label: EditLabel) -> Result<Self> {
        if let EditLabel::Typed(l) = &label {
            let shape = self.shape_op();
            let fits = match l.op() {
                Op::WO => shape == Op::R,
                op => op == shape,
            };
            if !fits {
                return Err(Error::InvalidLabel(format!(
                    "{l} does not fit span {}..{} -> {:?}",
                    self.start, self.end, self.replacement
                )));
            }
        }
        self.label = label;
        Ok(self)
    }

    pub fn with_annotator(mut self, annotator: usize) -> Self {
        self.annotator = annotator;
        self
    }

    /// Operation implied by the span shape alone.
    pub fn shape_op(&self) -> Op {
        if self.start == self.end {
            Op::M
        } else if self.text().is_empty() {
            Op::U
        } else {
            Op::R
        }
    }

    /// Replacement with token separators removed.
    pub fn text(&self) -> String {
        self.replacement.chars().filter(|c| !c.is_whitespace()).collect()
    }

    fn describe(&self) -> String {
        format!("{}..{} -> {:?}", self.start, self.end, self.replacement)
    }
}

/// Applies `edits` (sorted, non-overlapping) to `seg` and returns the corrected text.
///
/// Whitespace between two untouched tokens of the original text is kept.
pub fn apply_edits(seg: &Segmentation, edits: &[Edit]) -> Result<String> {
    let n = seg.tokens.len();
    for (i, e) in edits.iter().enumerate() {
        if e.end > n {
            return Err(Error::InvalidEdit(format!("{} beyond {n} tokens", e.describe())));
        }
        if i > 0 {
            let p = &edits[i - 1];
            if p.end > e.start || (p.start == e.start && p.start < p.end) {
                return Err(Error::Overlap { first: p.describe(), second: e.describe() });
            }
        }
    }
    let offsets: Vec<usize> = seg.text.char_indices().map(|(b, _)| b).chain([seg.text.len()]).collect();
    let slice = |a: usize, b: usize| -> &str {
        match (offsets.get(a), offsets.get(b)) {
            (Some(&x), Some(&y)) if x <= y => &seg.text[x..y],
            _ => "",
        }
    };
    let mut out = String::new();
    let mut next = 0;
    let mut covered_until = 0;
    for i in 0..=n {
        if i > 0 && i < n && i >= covered_until {
            out.push_str(slice(seg.tokens[i - 1].char_end, seg.tokens[i].char_start));
        }
        while next < edits.len() && edits[next].start == i {
            let e = &edits[next];
            out.extend(e.replacement.chars().filter(|c| !c.is_whitespace()));
            covered_until = covered_until.max(e.end);
            next += 1;
        }
        if i < n && i >= covered_until {
            out.push_str(&seg.tokens[i].surface);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dialect {
    /// ChERRANT layout: `T0-A0` lines, S/M/R/W operation names, `-NONE-` for deletions.
    Cherrant,
    /// R/M/U/WO operation names, empty replacement field for deletions.
    Refined,
}

impl FromStr for Dialect {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cherrant" => Ok(Dialect::Cherrant),
            "refined" => Ok(Dialect::Refined),
            other => Err(Error::InvalidLabel(format!("unknown dialect {other:?}"))),
        }
    }
}

/// One m2 record: a source sentence and the edit set of each annotator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationRecord {
    pub source: Segmentation,
    pub edit_sets: BTreeMap<usize, Vec<Edit>>,
    /// Raw `T0-A<k>` line content per annotator (ChERRANT dialect only).
    pub targets: BTreeMap<usize, String>,
    pub dialect: Dialect,
}

impl AnnotationRecord {
    pub fn new(source: Segmentation, dialect: Dialect) -> Self {
        AnnotationRecord { source, edit_sets: BTreeMap::new(), targets: BTreeMap::new(), dialect }
    }

    pub fn edits(&self, annotator: usize) -> &[Edit] {
        self.edit_sets.get(&annotator).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn edit_count(&self) -> usize {
        self.edit_sets.values().map(Vec::len).sum()
    }

    /// Target tokens for one annotator, derived by applying its edits.
    /// Spans past the end of the source are clamped to it.
    pub fn target_tokens(&self, annotator: usize) -> Vec<String> {
        let n = self.source.len();
        let mut out = Vec::new();
        let mut at = 0;
        for e in self.edits(annotator) {
            let start = e.start.min(n);
            out.extend(self.source.tokens[at.min(start)..start].iter().map(|t| t.surface.clone()));
            out.extend(e.replacement.split_whitespace().map(str::to_string));
            at = at.max(e.end.min(n));
        }
        out.extend(self.source.tokens[at..].iter().map(|t| t.surface.clone()));
        out
    }

    /// Checks spans against the source and label/shape agreement.
    pub fn validate(&self) -> Result<()> {
        for (ann, edits) in &self.edit_sets {
            for (i, e) in edits.iter().enumerate() {
                if e.end > self.source.len() || e.start > e.end {
                    return Err(Error::InvalidEdit(format!(
                        "annotator {ann}: {} outside {} tokens",
                        e.describe(),
                        self.source.len()
                    )));
                }
                e.clone().with_label(e.label.clone())?;
                if i > 0 && edits[i - 1].end > e.start {
                    return Err(Error::Overlap { first: edits[i - 1].describe(), second: e.describe() });
                }
            }
        }
        Ok(())
    }
}

/// An erroneous sentence with zero or more reference corrections.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SentencePair {
    pub id: String,
    pub source: String,
    pub references: Vec<String>,
    pub origin: String,
    pub meta: BTreeMap<String, String>,
}

impl SentencePair {
    pub fn new(id: impl Into<String>, source: impl Into<String>, references: Vec<String>, origin: &str) -> Result<Self> {
        let source = source.into();
        let id = id.into();
        if source.trim().is_empty() {
            return Err(Error::data(id, "empty source sentence"));
        }
        Ok(SentencePair { id, source, references, origin: origin.to_string(), meta: BTreeMap::new() })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub alpha1: f64,
    pub alpha2: f64,
}

impl Thresholds {
    pub fn new(alpha1: f64, alpha2: f64) -> Result<Self> {
        for a in [alpha1, alpha2] {
            if !(0.0..=1.0).contains(&a) {
                return Err(Error::InvalidLabel(format!("threshold {a} outside [0,1]")));
            }
        }
        Ok(Thresholds { alpha1, alpha2 })
    }
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { alpha1: 0.9, alpha2: 0.9 }
    }
}

/// Alignment costs. Substitutions between similar tokens are discounted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostConfig {
    pub sub_base: f64,
    pub sub_similar_discount: f64,
    pub similar_threshold: f64,
    pub insert_cost: f64,
    pub delete_cost: f64,
    pub transpose_cost: f64,
}

impl Default for CostConfig {
    fn default() -> Self {
        CostConfig {
            sub_base: 1.0,
            sub_similar_discount: 0.5,
            similar_threshold: 0.7,
            insert_cost: 1.0,
            delete_cost: 1.0,
            transpose_cost: 1.0,
        }
    }
}

impl CostConfig {
    pub fn validate(&self) -> Result<()> {
        let all = [self.sub_base, self.sub_similar_discount, self.insert_cost, self.delete_cost, self.transpose_cost];
        if all.iter().all(|c| c.is_finite() && *c > 0.0) {
            Ok(())
        } else {
            Err(Error::InvalidLabel("alignment costs must be positive".into()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chars(s: &str) -> Segmentation {
        let v: Vec<String> = s.chars().map(String::from).collect();
        Segmentation::from_surfaces(&v, Granularity::Character)
    }

    #[test]
    fn label_constraints() {
        assert!(ErrorLabel::new(Op::M, Some(Subtype::Pinyin)).is_err());
        assert!(ErrorLabel::new(Op::U, Some(Subtype::Co)).is_err());
        assert!(ErrorLabel::new(Op::M, Some(Subtype::De)).is_ok());
        assert!(ErrorLabel::new(Op::U, Some(Subtype::De)).is_err());
        assert!(ErrorLabel::new(Op::WO, Some(Subtype::Other)).is_err());
        assert!(ErrorLabel::new(Op::U, Some(Subtype::Pos(Upos::Part))).is_ok());
    }

    #[test]
    fn label_text_round_trip() {
        for s in ["R:PINYIN", "M:DE", "U:PART", "WO", "R", "R:NOUN", "M:VERB"] {
            assert_eq!(s.parse::<ErrorLabel>().unwrap().to_string(), s);
        }
        assert!("X:FOO".parse::<ErrorLabel>().is_err());
    }

    #[test]
    fn edit_shape_rules() {
        assert!(Edit::new(3, 3, "").is_err());
        assert_eq!(Edit::new(3, 3, "的").unwrap().shape_op(), Op::M);
        assert_eq!(Edit::new(3, 4, "").unwrap().shape_op(), Op::U);
        let m_de = ErrorLabel::new(Op::M, Some(Subtype::De)).unwrap();
        assert!(Edit::labeled(3, 4, "的", m_de).is_err());
        assert!(Edit::labeled(3, 3, "的", m_de).is_ok());
    }

    #[test]
    fn apply_figure_replacement() {
        let seg = Segmentation::from_surfaces(&["我", "一", "前", "没"], Granularity::Word);
        let e = Edit::new(1, 3, "以前").unwrap();
        assert_eq!(apply_edits(&seg, &[e]).unwrap(), "我以前没");
    }

    #[test]
    fn apply_identity_and_deletion() {
        let seg = chars("慶祝慶祝");
        assert_eq!(apply_edits(&seg, &[]).unwrap(), "慶祝慶祝");
        assert_eq!(apply_edits(&seg, &[Edit::new(2, 4, "").unwrap()]).unwrap(), "慶祝");
    }

    #[test]
    fn insertions_keep_order() {
        let seg = chars("ab");
        let edits = [Edit::new(1, 1, "x").unwrap(), Edit::new(1, 1, "y").unwrap(), Edit::new(1, 2, "z").unwrap()];
        assert_eq!(apply_edits(&seg, &edits).unwrap(), "axyz");
    }

    #[test]
    fn overlap_names_both_edits() {
        let seg = chars("abcd");
        let err = apply_edits(&seg, &[Edit::new(0, 2, "x").unwrap(), Edit::new(1, 3, "y").unwrap()]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("0..2") && msg.contains("1..3"), "{msg}");
    }

    #[test]
    fn whitespace_between_untouched_tokens_survives() {
        let seg = Segmentation {
            text: "好。 因为".into(),
            tokens: vec![
                Token { surface: "好".into(), char_start: 0, char_end: 1, pos: None },
                Token { surface: "。".into(), char_start: 1, char_end: 2, pos: None },
                Token { surface: "因".into(), char_start: 3, char_end: 4, pos: None },
                Token { surface: "为".into(), char_start: 4, char_end: 5, pos: None },
            ],
            granularity: Granularity::Character,
        };
        assert_eq!(apply_edits(&seg, &[Edit::new(0, 1, "坏").unwrap()]).unwrap(), "坏。 因为");
    }
}
