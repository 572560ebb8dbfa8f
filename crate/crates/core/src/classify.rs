//! Error-type classification of edits.

use crate::model::{AnnotationRecord, Edit, EditLabel, ErrorLabel, Op, Segmentation, Subtype, Thresholds, Upos};
use crate::resources::Providers;
use crate::segment::{segment_words, Lexicon};

const DE_PARTICLES: [&str; 3] = ["的", "地", "得"];

/// Which rung of the decision ladder produced a label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    Multi = 1,
    PinyinOrDe = 2,
    Shape = 3,
    CharOrder = 4,
    MissingDe = 5,
    Pos = 6,
}

/// Label for one edit plus the branch that fired.
pub fn classify_with_branch(edit: &Edit, src: &Segmentation, th: &Thresholds, p: &Providers) -> (Branch, ErrorLabel) {
    let s = src.span_text(edit.start, edit.end.min(src.len()));
    let t = edit.text();
    let op = edit.shape_op();

    if op == Op::R {
        if s.chars().count() == t.chars().count() {
            let pinyin = p.pinyin.similarity(&s, &t) > th.alpha1;
            let shape = p.shape.similarity(&s, &t) > th.alpha2;
            if pinyin && shape {
                return (Branch::Multi, ErrorLabel::of(Op::R, Subtype::Multi));
            }
            if pinyin {
                let sub = if DE_PARTICLES.contains(&t.as_str()) { Subtype::De } else { Subtype::Pinyin };
                return (Branch::PinyinOrDe, ErrorLabel::of(Op::R, sub));
            }
            if shape {
                return (Branch::Shape, ErrorLabel::of(Op::R, Subtype::Shape));
            }
        }
        if same_chars(&s, &t) {
            let label = if is_one_word(&t, p.lexicon) {
                ErrorLabel::of(Op::R, Subtype::Co)
            } else {
                ErrorLabel::word_order()
            };
            return (Branch::CharOrder, label);
        }
    }
    if op == Op::M && DE_PARTICLES.contains(&t.as_str()) {
        return (Branch::MissingDe, ErrorLabel::of(Op::M, Subtype::De));
    }
    let head = if op == Op::U { &s } else { &t };
    let sub = match single_word_pos(head, p.lexicon) {
        Some(pos) => Subtype::Pos(pos),
        None => Subtype::Other,
    };
    (Branch::Pos, ErrorLabel::of(op, sub))
}

/// Error label for one edit.
pub fn classify_edit(edit: &Edit, src: &Segmentation, th: &Thresholds, p: &Providers) -> ErrorLabel {
    classify_with_branch(edit, src, th, p).1
}

/// Relabels every edit of every annotator; order and ids are kept.
pub fn classify_all(record: &AnnotationRecord, th: &Thresholds, p: &Providers) -> AnnotationRecord {
    let mut out = record.clone();
    for edits in out.edit_sets.values_mut() {
        for e in edits.iter_mut() {
            e.label = EditLabel::Typed(classify_edit(e, &record.source, th, p));
        }
    }
    out
}

fn same_chars(a: &str, b: &str) -> bool {
    let mut x: Vec<char> = a.chars().collect();
    let mut y: Vec<char> = b.chars().collect();
    x.sort_unstable();
    y.sort_unstable();
    x == y
}

fn is_one_word(text: &str, lex: &Lexicon) -> bool {
    segment_words(text, lex).map(|s| s.len() == 1).unwrap_or(false)
}

fn single_word_pos(text: &str, lex: &Lexicon) -> Option<Upos> {
    let seg = segment_words(text, lex).ok()?;
    match seg.tokens.as_slice() {
        [one] => one.pos,
        _ => None,
    }
}
