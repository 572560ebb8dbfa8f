//! MaxMatch scoring and CGED detection metrics.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::annotate::Annotator;
use crate::error::{Error, Result};
use crate::m2::parse_m2;
use crate::model::{AnnotationRecord, Edit, Granularity};

/// True positive, false positive and false negative counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counts {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
}

impl Counts {
    pub fn new(tp: usize, fp: usize, fn_: usize) -> Self {
        Counts { tp, fp, fn_ }
    }

    /// `tp / (tp + fp)`, 1 when nothing was proposed.
    pub fn precision(&self) -> f64 {
        ratio(self.tp, self.tp + self.fp)
    }

    /// `tp / (tp + fn)`, 1 when there was nothing to find.
    pub fn recall(&self) -> f64 {
        ratio(self.tp, self.tp + self.fn_)
    }

    pub fn f_beta(&self, beta: f64) -> f64 {
        f_beta(self.precision(), self.recall(), beta)
    }

    fn add(&mut self, o: Counts) {
        self.tp += o.tp;
        self.fp += o.fp;
        self.fn_ += o.fn_;
    }
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        1.0
    } else {
        a as f64 / b as f64
    }
}

/// `(1 + β²)·p·r / (β²·p + r)`; 0 when the denominator is 0.
pub fn f_beta(p: f64, r: f64, beta: f64) -> f64 {
    let b2 = beta * beta;
    let den = b2 * p + r;
    if den == 0.0 {
        0.0
    } else {
        (1.0 + b2) * p * r / den
    }
}

type MatchKey = (usize, usize, String);

fn key(e: &Edit) -> MatchKey {
    (e.start, e.end, e.text())
}

/// Best gold set for one sentence.
#[derive(Debug, Clone, PartialEq)]
pub struct SentenceMatch {
    pub counts: Counts,
    /// 0-based index into the gold sets.
    pub chosen: usize,
    pub per_type: BTreeMap<String, Counts>,
}

fn count_against(system: &[Edit], gold: &[Edit]) -> (Counts, BTreeMap<String, Counts>) {
    let mut per_type: BTreeMap<String, Counts> = BTreeMap::new();
    let mut remaining: Vec<Option<&Edit>> = gold.iter().map(Some).collect();
    let mut c = Counts::default();
    for s in system {
        let k = key(s);
        match remaining.iter_mut().find(|g| g.map(|g| key(g) == k).unwrap_or(false)) {
            Some(slot) => {
                let g = slot.take().expect("slot checked above");
                c.tp += 1;
                per_type.entry(g.label.to_string()).or_default().tp += 1;
            }
            None => {
                c.fp += 1;
                per_type.entry(s.label.to_string()).or_default().fp += 1;
            }
        }
    }
    for g in remaining.into_iter().flatten() {
        c.fn_ += 1;
        per_type.entry(g.label.to_string()).or_default().fn_ += 1;
    }
    (c, per_type)
}

/// Scores a system edit set against each gold set and keeps the one with
/// the highest F_β; ties go to the lower index. An empty list of gold sets
/// is treated as a single empty set.
pub fn max_match_counts(system: &[Edit], gold_sets: &[&[Edit]], beta: f64) -> SentenceMatch {
    let empty: [&[Edit]; 1] = [&[]];
    let sets = if gold_sets.is_empty() { &empty[..] } else { gold_sets };
    let mut best: Option<(f64, SentenceMatch)> = None;
    for (i, g) in sets.iter().enumerate() {
        let (counts, per_type) = count_against(system, g);
        let f = counts.f_beta(beta);
        if best.as_ref().map(|(bf, _)| f > *bf).unwrap_or(true) {
            best = Some((f, SentenceMatch { counts, chosen: i, per_type }));
        }
    }
    best.expect("at least one gold set").1
}

/// Corpus-level scores.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreReport {
    pub counts: Counts,
    pub precision: f64,
    pub recall: f64,
    pub f_beta: f64,
    pub beta: f64,
    pub per_type: BTreeMap<String, Counts>,
    pub granularity: Granularity,
    pub sentences: usize,
}

impl ScoreReport {
    fn from_parts(counts: Counts, per_type: BTreeMap<String, Counts>, beta: f64, granularity: Granularity, sentences: usize) -> Self {
        ScoreReport {
            counts,
            precision: counts.precision(),
            recall: counts.recall(),
            f_beta: counts.f_beta(beta),
            beta,
            per_type,
            granularity,
            sentences,
        }
    }

    fn f_name(&self) -> String {
        format!("F{}", self.beta)
    }

    /// Per-type rows, most false negatives first.
    pub fn per_type_sorted(&self) -> Vec<(&str, Counts)> {
        let mut rows: Vec<(&str, Counts)> = self.per_type.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        rows.sort_by(|a, b| b.1.fn_.cmp(&a.1.fn_).then_with(|| a.0.cmp(b.0)));
        rows
    }

    /// `metric<TAB>value` lines.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "granularity\t{}", self.granularity);
        let _ = writeln!(out, "sentences\t{}", self.sentences);
        let _ = writeln!(out, "TP\t{}", self.counts.tp);
        let _ = writeln!(out, "FP\t{}", self.counts.fp);
        let _ = writeln!(out, "FN\t{}", self.counts.fn_);
        let _ = writeln!(out, "Precision\t{:.4}", self.precision);
        let _ = writeln!(out, "Recall\t{:.4}", self.recall);
        let _ = writeln!(out, "{}\t{:.4}", self.f_name(), self.f_beta);
        for (t, c) in self.per_type_sorted() {
            let _ = writeln!(out, "TP[{t}]\t{}", c.tp);
            let _ = writeln!(out, "FP[{t}]\t{}", c.fp);
            let _ = writeln!(out, "FN[{t}]\t{}", c.fn_);
        }
        out
    }

    /// Human-readable table.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let f = self.f_name();
        let _ = writeln!(out, "Granularity: {}  Sentences: {}", self.granularity, self.sentences);
        let _ = writeln!(out, "{:>6} {:>6} {:>6} {:>9} {:>9} {:>9}", "TP", "FP", "FN", "Prec", "Rec", f);
        let _ = writeln!(
            out,
            "{:>6} {:>6} {:>6} {:>9.4} {:>9.4} {:>9.4}",
            self.counts.tp, self.counts.fp, self.counts.fn_, self.precision, self.recall, self.f_beta
        );
        let rows = self.per_type_sorted();
        if !rows.is_empty() {
            let width = rows.iter().map(|(t, _)| t.chars().count()).max().unwrap_or(4).max(4);
            let _ = writeln!(out);
            let _ = writeln!(out, "{:<width$} {:>6} {:>6} {:>6} {:>9}", "Type", "TP", "FP", "FN", f);
            for (t, c) in rows {
                let pad = width - t.chars().count() + t.len();
                let _ = writeln!(out, "{:<pad$} {:>6} {:>6} {:>6} {:>9.4}", t, c.tp, c.fp, c.fn_, c.f_beta(self.beta));
            }
        }
        out
    }
}

fn system_edits(r: &AnnotationRecord) -> &[Edit] {
    r.edit_sets.values().next().map(|v| v.as_slice()).unwrap_or(&[])
}

/// Scores parsed records pairwise. Sources must agree token for token.
pub fn score_records(system: &[AnnotationRecord], gold: &[AnnotationRecord], beta: f64) -> Result<ScoreReport> {
    if system.len() != gold.len() {
        return Err(Error::SourceMismatch(system.len().min(gold.len()) + 1));
    }
    let mut total = Counts::default();
    let mut per_type: BTreeMap<String, Counts> = BTreeMap::new();
    let mut granularity = Granularity::Character;
    for (i, (s, g)) in system.iter().zip(gold).enumerate() {
        if !s.source.surfaces().eq(g.source.surfaces()) {
            if s.source.joined() == g.source.joined() {
                return Err(Error::GranularityMismatch(s.source.granularity, g.source.granularity));
            }
            return Err(Error::SourceMismatch(i + 1));
        }
        if g.source.granularity == Granularity::Word {
            granularity = Granularity::Word;
        }
        let sets: Vec<&[Edit]> = g.edit_sets.values().map(|v| v.as_slice()).collect();
        let m = max_match_counts(system_edits(s), &sets, beta);
        total.add(m.counts);
        for (k, c) in m.per_type {
            per_type.entry(k).or_default().add(c);
        }
    }
    Ok(ScoreReport::from_parts(total, per_type, beta, granularity, system.len()))
}

/// Scores two m2 texts. When `granularity` is given, records at the other
/// granularity are re-annotated first.
pub fn score_corpus(
    system_m2: &str,
    gold_m2: &str,
    beta: f64,
    granularity: Option<Granularity>,
    annotator: &Annotator,
) -> Result<ScoreReport> {
    let mut system = parse_m2(system_m2)?;
    let mut gold = parse_m2(gold_m2)?;
    if let Some(gran) = granularity {
        for r in system.iter_mut().chain(gold.iter_mut()) {
            if r.source.granularity != gran {
                *r = annotator.regranularize(r, gran)?;
            }
        }
    }
    let mut report = score_records(&system, &gold, beta)?;
    if let Some(gran) = granularity {
        report.granularity = gran;
    }
    Ok(report)
}

/// A typed span in a corpus's own offsets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypedSpan {
    pub start: usize,
    pub end: usize,
    pub kind: String,
}

/// F₁ at the three CGED levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionLevels {
    pub detection: Counts,
    pub identification: Counts,
    pub position: Counts,
}

impl DetectionLevels {
    pub fn f1(&self) -> (f64, f64, f64) {
        (self.detection.f_beta(1.0), self.identification.f_beta(1.0), self.position.f_beta(1.0))
    }
}

fn multiset_counts<T: Ord + Clone>(sys: &[T], gold: &[T]) -> Counts {
    let mut m: BTreeMap<T, usize> = BTreeMap::new();
    for g in gold {
        *m.entry(g.clone()).or_default() += 1;
    }
    let mut tp = 0;
    for s in sys {
        if let Some(n) = m.get_mut(s).filter(|n| **n > 0) {
            *n -= 1;
            tp += 1;
        }
    }
    Counts::new(tp, sys.len() - tp, gold.len() - tp)
}

/// Detection compares per-sentence error flags, identification compares
/// type multisets, position compares exact typed spans. Sentences are
/// paired by id; ids missing on one side count as error-free there.
pub fn detection_levels(system: &BTreeMap<String, Vec<TypedSpan>>, gold: &BTreeMap<String, Vec<TypedSpan>>) -> DetectionLevels {
    let mut lv = DetectionLevels { detection: Counts::default(), identification: Counts::default(), position: Counts::default() };
    let none = Vec::new();
    let ids: std::collections::BTreeSet<&String> = system.keys().chain(gold.keys()).collect();
    for id in ids {
        let s = system.get(id).unwrap_or(&none);
        let g = gold.get(id).unwrap_or(&none);
        match (s.is_empty(), g.is_empty()) {
            (false, false) => lv.detection.tp += 1,
            (false, true) => lv.detection.fp += 1,
            (true, false) => lv.detection.fn_ += 1,
            (true, true) => {}
        }
        let st: Vec<&str> = s.iter().map(|x| x.kind.as_str()).collect();
        let gt: Vec<&str> = g.iter().map(|x| x.kind.as_str()).collect();
        lv.identification.add(multiset_counts(&st, &gt));
        lv.position.add(multiset_counts(s, g));
    }
    lv
}

/// Parses CGED system output: `id, start, end, type` per error or
/// `id, correct` for an error-free sentence.
pub fn parse_cged_result(text: &str) -> Result<BTreeMap<String, Vec<TypedSpan>>> {
    let mut out: BTreeMap<String, Vec<TypedSpan>> = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        match f.as_slice() {
            [id, c] if c.eq_ignore_ascii_case("correct") => {
                out.entry(id.to_string()).or_default();
            }
            [id, s, e, t, ..] => {
                let num = |x: &str| x.parse::<usize>().map_err(|_| Error::parse(i + 1, format!("non-integer offset {x:?}")));
                let span = TypedSpan { start: num(s)?, end: num(e)?, kind: t.to_string() };
                out.entry(id.to_string()).or_default().push(span);
            }
            _ => return Err(Error::parse(i + 1, format!("expected `id, start, end, type` or `id, correct`, got {line:?}"))),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: usize, t: usize, r: &str) -> Edit {
        Edit::new(s, t, r).unwrap()
    }

    #[test]
    fn f_beta_values() {
        assert!((f_beta(1.0, 0.5, 1.0) - 2.0 / 3.0).abs() < 1e-12);
        assert!((f_beta(1.0, 0.5, 0.5) - 0.625 / 0.75).abs() < 1e-12);
        assert_eq!(f_beta(0.0, 0.0, 0.5), 0.0);
    }

    #[test]
    fn worked_example_counts() {
        let sys = [e(1, 3, "以前")];
        let gold = [e(1, 3, "以 前"), e(15, 16, "")];
        let m = max_match_counts(&sys, &[&gold], 0.5);
        assert_eq!(m.counts, Counts::new(1, 0, 1));
    }

    #[test]
    fn better_second_reference_is_chosen() {
        let sys = [e(0, 1, "甲"), e(2, 3, "乙")];
        let g1 = [e(0, 1, "丙")];
        let g2 = [e(0, 1, "甲"), e(5, 6, "")];
        let m = max_match_counts(&sys, &[&g1, &g2], 0.5);
        assert_eq!(m.chosen, 1);
        assert_eq!(m.counts, Counts::new(1, 1, 1));
    }

    #[test]
    fn ties_go_to_lower_index() {
        let sys = [e(0, 1, "x")];
        let g = [e(1, 2, "y")];
        assert_eq!(max_match_counts(&sys, &[&g, &g], 0.5).chosen, 0);
    }

    #[test]
    fn empty_system_convention() {
        let m = max_match_counts(&[], &[&[e(0, 1, "x")]], 0.5);
        assert_eq!(m.counts.precision(), 1.0);
        assert_eq!(m.counts.recall(), 0.0);
        assert_eq!(m.counts.f_beta(0.5), 0.0);
    }

    #[test]
    fn detection_levels_wrong_types() {
        let sp = |k: &str| TypedSpan { start: 1, end: 2, kind: k.into() };
        let gold: BTreeMap<String, Vec<TypedSpan>> =
            [("a".to_string(), vec![sp("S")]), ("b".to_string(), vec![sp("M")]), ("c".to_string(), vec![])].into_iter().collect();
        let sys: BTreeMap<String, Vec<TypedSpan>> =
            [("a".to_string(), vec![sp("R")]), ("b".to_string(), vec![sp("W")]), ("c".to_string(), vec![])].into_iter().collect();
        let (d, i, p) = detection_levels(&sys, &gold).f1();
        assert_eq!((d, i, p), (1.0, 0.0, 0.0));
    }

    #[test]
    fn cged_result_lines() {
        let r = parse_cged_result("0001, 9, 11, R\n0001, 15, 15, M\n0002, correct\n").unwrap();
        assert_eq!(r["0001"].len(), 2);
        assert!(r["0002"].is_empty());
        assert!(parse_cged_result("0001, x, 2, R\n").is_err());
    }
}
