//! Agreement between two annotations of the same sentences.

use std::fmt;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{AnnotationRecord, Edit, Segmentation};

/// How a disagreement between the two sides is explained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    /// Same span and replacement, different label.
    TypeOnly,
    /// Same local correction with different span boundaries.
    BoundaryOnly,
    /// One side records a reordering as a single edit, the other as several.
    OrderRepresentation,
    /// The two sides correct the region differently, or only one side edits it.
    Other,
}

impl Category {
    pub fn as_str(self) -> &'static str {
        match self {
            Category::TypeOnly => "type-only",
            Category::BoundaryOnly => "boundary-only",
            Category::OrderRepresentation => "order-representation",
            Category::Other => "other",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One explained disagreement.
#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    /// 1-based sentence number.
    pub sentence: usize,
    pub category: Category,
    pub a: Vec<Edit>,
    pub b: Vec<Edit>,
}

/// Totals over a pair of files.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DiffReport {
    pub sentences: usize,
    pub agreeing_sentences: usize,
    pub edits_a: usize,
    pub edits_b: usize,
    pub matched: usize,
    pub mismatches: Vec<Mismatch>,
}

impl DiffReport {
    pub fn count(&self, c: Category) -> usize {
        self.mismatches.iter().filter(|m| m.category == c).count()
    }

    /// Share of edits, over both sides, that match exactly.
    pub fn edit_agreement(&self) -> f64 {
        let total = self.edits_a + self.edits_b;
        if total == 0 {
            1.0
        } else {
            2.0 * self.matched as f64 / total as f64
        }
    }

    /// Share of sentences whose edit sets are identical.
    pub fn sentence_agreement(&self) -> f64 {
        if self.sentences == 0 {
            1.0
        } else {
            self.agreeing_sentences as f64 / self.sentences as f64
        }
    }

    /// `metric<TAB>value` summary followed by one line per mismatch.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "sentences\t{}", self.sentences);
        let _ = writeln!(out, "edits_a\t{}", self.edits_a);
        let _ = writeln!(out, "edits_b\t{}", self.edits_b);
        let _ = writeln!(out, "matched\t{}", self.matched);
        for c in [Category::TypeOnly, Category::BoundaryOnly, Category::OrderRepresentation, Category::Other] {
            let _ = writeln!(out, "{c}\t{}", self.count(c));
        }
        let _ = writeln!(out, "edit_agreement\t{:.2}%", 100.0 * self.edit_agreement());
        let _ = writeln!(out, "sentence_agreement\t{:.2}%", 100.0 * self.sentence_agreement());
        for m in &self.mismatches {
            let show = |es: &[Edit]| {
                es.iter().map(|e| format!("{} {}|{}|{}", e.start, e.end, e.label, e.replacement)).collect::<Vec<_>>().join("; ")
            };
            let _ = writeln!(out, "#{}\t{}\t{}\t{}", m.sentence, m.category, show(&m.a), show(&m.b));
        }
        out
    }
}

fn first_set(r: &AnnotationRecord) -> &[Edit] {
    r.edit_sets.values().next().map(|v| v.as_slice()).unwrap_or(&[])
}

fn same_span(x: &Edit, y: &Edit) -> bool {
    x.start == y.start && x.end == y.end && x.text() == y.text()
}

/// Compares the first edit set of each record pairwise.
pub fn diff_records(a: &[AnnotationRecord], b: &[AnnotationRecord]) -> Result<DiffReport> {
    if a.len() != b.len() {
        return Err(Error::SourceMismatch(a.len().min(b.len()) + 1));
    }
    let mut rep = DiffReport { sentences: a.len(), ..Default::default() };
    for (i, (ra, rb)) in a.iter().zip(b).enumerate() {
        if ra.source.joined() != rb.source.joined() {
            return Err(Error::SourceMismatch(i + 1));
        }
        let (ea, eb) = (first_set(ra), first_set(rb));
        rep.edits_a += ea.len();
        rep.edits_b += eb.len();
        let before = rep.mismatches.len();
        let matched_before = rep.matched;
        diff_sentence(i + 1, &ra.source, ea, eb, &mut rep);
        if rep.mismatches.len() == before && rep.matched - matched_before == ea.len() && ea.len() == eb.len() {
            rep.agreeing_sentences += 1;
        }
    }
    Ok(rep)
}

fn diff_sentence(sentence: usize, src: &Segmentation, ea: &[Edit], eb: &[Edit], rep: &mut DiffReport) {
    let mut used_b = vec![false; eb.len()];
    let mut rest_a = Vec::new();
    for x in ea {
        let exact = eb.iter().enumerate().position(|(j, y)| !used_b[j] && same_span(x, y) && x.label == y.label);
        let loose = exact.or_else(|| eb.iter().enumerate().position(|(j, y)| !used_b[j] && same_span(x, y)));
        match loose {
            Some(j) => {
                used_b[j] = true;
                if exact.is_some() {
                    rep.matched += 1;
                } else {
                    rep.mismatches.push(Mismatch { sentence, category: Category::TypeOnly, a: vec![x.clone()], b: vec![eb[j].clone()] });
                }
            }
            None => rest_a.push(x.clone()),
        }
    }
    let rest_b: Vec<Edit> = eb.iter().zip(&used_b).filter(|(_, u)| !**u).map(|(e, _)| e.clone()).collect();

    for (ca, cb) in clusters(rest_a, rest_b) {
        let category = explain(src, &ca, &cb);
        rep.mismatches.push(Mismatch { sentence, category, a: ca, b: cb });
    }
}

/// Groups edits from both sides whose spans overlap or touch.
fn clusters(a: Vec<Edit>, b: Vec<Edit>) -> Vec<(Vec<Edit>, Vec<Edit>)> {
    let mut all: Vec<(bool, Edit)> = a.into_iter().map(|e| (true, e)).chain(b.into_iter().map(|e| (false, e))).collect();
    all.sort_by_key(|(_, e)| (e.start, e.end));
    let mut out: Vec<(usize, Vec<Edit>, Vec<Edit>)> = Vec::new();
    for (side_a, e) in all {
        let joins = out.last().map(|(hi, _, _)| e.start <= *hi).unwrap_or(false);
        if !joins {
            out.push((e.end, Vec::new(), Vec::new()));
        }
        let last = out.last_mut().expect("cluster pushed above");
        last.0 = last.0.max(e.end);
        if side_a {
            last.1.push(e);
        } else {
            last.2.push(e);
        }
    }
    out.into_iter().map(|(_, a, b)| (a, b)).collect()
}

fn local_text(src: &Segmentation, edits: &[Edit], lo: usize, hi: usize) -> String {
    let mut out = String::new();
    let mut at = lo;
    for e in edits {
        out.push_str(&src.span_text(at, e.start.max(at)));
        out.push_str(&e.text());
        at = at.max(e.end);
    }
    out.push_str(&src.span_text(at, hi.max(at)));
    out
}

fn is_reordering(src: &Segmentation, e: &Edit) -> bool {
    let mut s: Vec<char> = src.span_text(e.start, e.end).chars().collect();
    let mut t: Vec<char> = e.text().chars().collect();
    s.sort_unstable();
    t.sort_unstable();
    e.end > e.start && s == t
}

fn explain(src: &Segmentation, a: &[Edit], b: &[Edit]) -> Category {
    if a.is_empty() || b.is_empty() {
        return Category::Other;
    }
    let lo = a.iter().chain(b).map(|e| e.start).min().unwrap_or(0);
    let hi = a.iter().chain(b).map(|e| e.end).max().unwrap_or(0).min(src.len());
    if local_text(src, a, lo, hi) != local_text(src, b, lo, hi) {
        return Category::Other;
    }
    let single_reorder = |one: &[Edit], many: &[Edit]| one.len() == 1 && many.len() > 1 && is_reordering(src, &one[0]);
    if single_reorder(a, b) || single_reorder(b, a) {
        Category::OrderRepresentation
    } else {
        Category::BoundaryOnly
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::m2::parse_m2;

    fn diff(a: &str, b: &str) -> DiffReport {
        diff_records(&parse_m2(a).unwrap(), &parse_m2(b).unwrap()).unwrap()
    }

    #[test]
    fn self_diff_is_full_agreement() {
        let m = "S 我 对 这 事\nA 1 2|||R:ADP|||对于|||REQUIRED|||-NONE-|||0\n";
        let r = diff(m, m);
        assert_eq!(r.edit_agreement(), 1.0);
        assert_eq!(r.sentence_agreement(), 1.0);
        assert!(r.mismatches.is_empty());
    }

    #[test]
    fn categories() {
        let base = "S 我 对 这 事 很 好\n";
        let a = format!("{base}A 1 2|||R:ADP|||对于|||REQUIRED|||-NONE-|||0\n");
        let b = format!("{base}A 2 2|||M:ADP|||于|||REQUIRED|||-NONE-|||0\n");
        assert_eq!(diff(&a, &b).mismatches[0].category, Category::BoundaryOnly);

        let c = format!("{base}A 1 2|||R:OTHER|||对于|||REQUIRED|||-NONE-|||0\n");
        assert_eq!(diff(&a, &c).mismatches[0].category, Category::TypeOnly);

        let sw = format!("{base}A 2 4|||Switch|||事 这|||REQUIRED|||-NONE-|||0\n");
        let subs = format!("{base}A 2 3|||R:X|||事|||REQUIRED|||-NONE-|||0\nA 3 4|||R:X|||这|||REQUIRED|||-NONE-|||0\n");
        assert_eq!(diff(&sw, &subs).mismatches[0].category, Category::OrderRepresentation);

        let other = format!("{base}A 5 6|||R:X|||坏|||REQUIRED|||-NONE-|||0\n");
        let r = diff(&a, &other);
        assert!(r.mismatches.iter().all(|m| m.category == Category::Other));
        assert_eq!(r.sentence_agreement(), 0.0);
    }
}
