//! Readers for the public CGEC corpora and the unified parallel format.

mod cged;
mod json;
mod nlpcc;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::annotate::Annotator;
use crate::error::{Error, Result};
use crate::model::{AnnotationRecord, Dialect, Edit, EditLabel, SentencePair};
use crate::score::TypedSpan;
use crate::segment::segment_chars;

pub use cged::parse_cged;
pub use json::{parse_cctc, parse_cefe, parse_fcgec, parse_flacgec, parse_nacgec, parse_yaclc};
pub use nlpcc::{parse_nlpcc_seg, parse_nlpcc_train};

/// Input formats understood by [`parse`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CorpusFormat {
    Cged2014,
    Cged2015,
    Cged2016Plus,
    Cged2020,
    NlpccTrain,
    NlpccSeg,
    Fcgec,
    Flacgec,
    Yaclc,
    Cctc,
    Nacgec,
    Cefe,
    /// `id<TAB>source<TAB>ref…`, also used by MuCGEC.
    Parallel,
}

impl CorpusFormat {
    pub const ALL: [CorpusFormat; 13] = [
        CorpusFormat::Cged2014,
        CorpusFormat::Cged2015,
        CorpusFormat::Cged2016Plus,
        CorpusFormat::Cged2020,
        CorpusFormat::NlpccTrain,
        CorpusFormat::NlpccSeg,
        CorpusFormat::Fcgec,
        CorpusFormat::Flacgec,
        CorpusFormat::Yaclc,
        CorpusFormat::Cctc,
        CorpusFormat::Nacgec,
        CorpusFormat::Cefe,
        CorpusFormat::Parallel,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CorpusFormat::Cged2014 => "cged2014",
            CorpusFormat::Cged2015 => "cged2015",
            CorpusFormat::Cged2016Plus => "cged2016plus",
            CorpusFormat::Cged2020 => "cged2020",
            CorpusFormat::NlpccTrain => "nlpcc-train",
            CorpusFormat::NlpccSeg => "nlpcc-seg",
            CorpusFormat::Fcgec => "fcgec",
            CorpusFormat::Flacgec => "flacgec",
            CorpusFormat::Yaclc => "yaclc",
            CorpusFormat::Cctc => "cctc",
            CorpusFormat::Nacgec => "nacgec",
            CorpusFormat::Cefe => "cefe",
            CorpusFormat::Parallel => "parallel",
        }
    }
}

impl fmt::Display for CorpusFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CorpusFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase();
        if s == "mucgec" {
            return Ok(CorpusFormat::Parallel);
        }
        CorpusFormat::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| Error::InvalidLabel(format!("unknown corpus format {s:?}")))
    }
}

/// A CGED error span in the corpus's own 1-based offsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CgedSpan {
    pub start: usize,
    pub end: usize,
    pub kind: String,
    pub answers: Vec<String>,
}

impl CgedSpan {
    pub fn typed(&self) -> TypedSpan {
        TypedSpan { start: self.start, end: self.end, kind: self.kind.clone() }
    }
}

/// One parsed sentence.
#[derive(Debug, Clone, PartialEq)]
pub struct Item {
    pub pair: SentencePair,
    /// Gold edits per reference, over the characters of the source, when
    /// the format locates its corrections.
    pub gold: Option<Vec<Vec<Edit>>>,
    pub spans: Vec<CgedSpan>,
    pub warnings: Vec<String>,
}

impl Item {
    pub(crate) fn plain(pair: SentencePair) -> Self {
        Item { pair, gold: None, spans: Vec::new(), warnings: Vec::new() }
    }

    /// Annotation record at the annotator's settings. Located gold edits are
    /// kept as given (character level) and only unlabeled ones are
    /// classified; otherwise each reference is aligned afresh.
    pub fn to_record(&self, annotator: &Annotator, dialect: Dialect) -> Result<AnnotationRecord> {
        if self.pair.meta.get("presegmented").map(String::as_str) == Some("true") {
            return annotator.annotate_presegmented(&self.pair.source, &self.pair.references, dialect);
        }
        let Some(gold) = &self.gold else {
            return annotator.annotate(&self.pair.source, &self.pair.references, dialect);
        };
        let src = segment_chars(&self.pair.source)?;
        let mut rec = AnnotationRecord::new(src, dialect);
        let p = annotator.providers();
        for (k, edits) in gold.iter().enumerate() {
            let labeled = edits
                .iter()
                .map(|e| {
                    let mut e = e.clone().with_annotator(k);
                    if e.label == EditLabel::Unclassified {
                        e.label = EditLabel::Typed(crate::classify::classify_edit(&e, &rec.source, &annotator.thresholds, &p));
                    }
                    e
                })
                .collect();
            rec.edit_sets.insert(k, labeled);
            if dialect == Dialect::Cherrant {
                let target = crate::model::apply_edits(&rec.source, edits)?;
                rec.targets.insert(k, target.chars().filter(|c| !c.is_whitespace()).map(String::from).collect::<Vec<_>>().join(" "));
            }
        }
        Ok(rec)
    }
}

/// Parses a whole input file.
pub fn parse(text: &str, format: CorpusFormat, annotator: &Annotator) -> Result<Vec<Item>> {
    match format {
        CorpusFormat::Cged2014 | CorpusFormat::Cged2015 | CorpusFormat::Cged2016Plus | CorpusFormat::Cged2020 => {
            parse_cged(text, format, annotator)
        }
        CorpusFormat::NlpccTrain => lines(text, |no, line| parse_nlpcc_train(line).map_err(|e| at_record(e, no))),
        CorpusFormat::NlpccSeg => lines(text, |no, line| parse_nlpcc_seg(&no.to_string(), line)),
        CorpusFormat::Parallel => lines(text, |no, line| parse_parallel_line(line).map_err(|e| at_record(e, no))),
        CorpusFormat::Fcgec => json::records(text)?.iter().map(|(id, v)| parse_fcgec(id, v)).collect(),
        CorpusFormat::Flacgec => json::records(text)?.iter().map(|(id, v)| parse_flacgec(id, v)).collect(),
        CorpusFormat::Yaclc => json::records(text)?.iter().map(|(id, v)| parse_yaclc(id, v)).collect(),
        CorpusFormat::Nacgec => json::records(text)?.iter().map(|(id, v)| parse_nacgec(id, v)).collect(),
        CorpusFormat::Cefe => json::records(text)?.iter().map(|(id, v)| parse_cefe(id, v)).collect(),
        CorpusFormat::Cctc => {
            let mut out = Vec::new();
            for (id, v) in json::records(text)? {
                out.extend(parse_cctc(&id, &v)?);
            }
            Ok(out)
        }
    }
}

fn at_record(e: Error, line: usize) -> Error {
    let record = format!("line {line}");
    match e {
        Error::Data { msg, .. } | Error::Parse { msg, .. } => Error::Data { record, msg },
        other => Error::Data { record, msg: other.to_string() },
    }
}

fn lines(text: &str, mut f: impl FnMut(usize, &str) -> Result<Item>) -> Result<Vec<Item>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| f(i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .collect()
}

/// `id<TAB>source<TAB>ref…`; trailing empty fields are dropped.
pub fn parse_parallel_line(line: &str) -> Result<Item> {
    let mut fields: Vec<&str> = line.split('\t').collect();
    while fields.len() > 2 && fields.last().map(|f| f.is_empty()).unwrap_or(false) {
        fields.pop();
    }
    if fields.len() < 2 {
        return Err(Error::data(fields[0], "expected id<TAB>source[<TAB>reference…]"));
    }
    let refs = fields[2..].iter().map(|s| s.to_string()).collect();
    Ok(Item::plain(SentencePair::new(fields[0], fields[1], refs, "parallel")?))
}

/// Serializes pairs as `id<TAB>source<TAB>ref…` lines.
pub fn write_parallel<'a>(pairs: impl IntoIterator<Item = &'a SentencePair>) -> Result<String> {
    let mut out = String::new();
    for (i, p) in pairs.into_iter().enumerate() {
        let fields = std::iter::once(&p.id).chain(std::iter::once(&p.source)).chain(&p.references);
        let mut first = true;
        for f in fields {
            if f.contains(['\t', '\n', '\r']) {
                return Err(Error::data(format!("line {}", i + 1), format!("field {f:?} contains a tab or line break")));
            }
            if !first {
                out.push('\t');
            }
            out.push_str(f);
            first = false;
        }
        out.push('\n');
    }
    Ok(out)
}

/// Maps code-point offsets of `text` to indices among its non-whitespace
/// characters; whitespace positions map to `None`.
pub(crate) fn char_index_map(text: &str) -> Vec<Option<usize>> {
    let mut k = 0;
    text.chars()
        .map(|c| {
            if c.is_whitespace() {
                None
            } else {
                k += 1;
                Some(k - 1)
            }
        })
        .collect()
}

pub(crate) fn with_meta(mut pair: SentencePair, meta: impl IntoIterator<Item = (String, String)>) -> SentencePair {
    let extra: BTreeMap<String, String> = meta.into_iter().collect();
    pair.meta.extend(extra);
    pair
}
