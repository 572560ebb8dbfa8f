//! Damerau–Levenshtein alignment, edit merging and word-order detection.

use crate::error::{Error, Result};
use crate::model::{CostConfig, Edit, EditLabel, ErrorLabel, Segmentation};
use crate::resources::Providers;
use crate::segment::{segment_words, Lexicon};

const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OpKind {
    Match,
    Transpose,
    Substitute,
    Delete,
    Insert,
}

/// One step of an edit script. `src`/`tgt` are the token indices where the
/// step begins on each side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RawOp {
    pub kind: OpKind,
    pub src: usize,
    pub tgt: usize,
}

impl RawOp {
    pub fn src_len(&self) -> usize {
        match self.kind {
            OpKind::Match | OpKind::Substitute | OpKind::Delete => 1,
            OpKind::Transpose => 2,
            OpKind::Insert => 0,
        }
    }

    pub fn tgt_len(&self) -> usize {
        match self.kind {
            OpKind::Match | OpKind::Substitute | OpKind::Insert => 1,
            OpKind::Transpose => 2,
            OpKind::Delete => 0,
        }
    }
}

/// Substitution cost between two different tokens.
pub fn substitution_cost(a: &str, b: &str, cfg: &CostConfig, p: &Providers) -> f64 {
    let t = cfg.similar_threshold;
    if p.pinyin.similarity(a, b) > t || p.shape.similarity(a, b) > t {
        cfg.sub_base * cfg.sub_similar_discount
    } else {
        cfg.sub_base
    }
}

/// Total cost of a script under `cfg`.
pub fn script_cost(ops: &[RawOp], src: &Segmentation, tgt: &Segmentation, cfg: &CostConfig, p: &Providers) -> f64 {
    ops.iter()
        .map(|op| match op.kind {
            OpKind::Match => 0.0,
            OpKind::Transpose => cfg.transpose_cost,
            OpKind::Substitute => {
                substitution_cost(&src.tokens[op.src].surface, &tgt.tokens[op.tgt].surface, cfg, p)
            }
            OpKind::Delete => cfg.delete_cost,
            OpKind::Insert => cfg.insert_cost,
        })
        .sum()
}

/// Minimal-cost script turning `src` into `tgt` (restricted Damerau–Levenshtein).
///
/// Ties are broken from the end of the sentences backwards, preferring
/// match, then transpose, substitute, delete, insert.
pub fn align(src: &Segmentation, tgt: &Segmentation, cfg: &CostConfig, p: &Providers) -> Result<Vec<RawOp>> {
    if src.granularity != tgt.granularity {
        return Err(Error::GranularityMismatch(src.granularity, tgt.granularity));
    }
    cfg.validate()?;
    let s: Vec<&str> = src.surfaces().collect();
    let t: Vec<&str> = tgt.surfaces().collect();
    let (n, m) = (s.len(), t.len());
    let w = m + 1;
    let mut sub = vec![0.0; n * m];
    for i in 0..n {
        for j in 0..m {
            if s[i] != t[j] {
                sub[i * m + j] = substitution_cost(s[i], t[j], cfg, p);
            }
        }
    }
    let transposable = |i: usize, j: usize| {
        i >= 2 && j >= 2 && s[i - 1] == t[j - 2] && s[i - 2] == t[j - 1] && s[i - 1] != s[i - 2]
    };
    let mut d = vec![0.0f64; (n + 1) * w];
    for i in 0..=n {
        for j in 0..=m {
            if i == 0 && j == 0 {
                continue;
            }
            let mut best = f64::INFINITY;
            if i > 0 && j > 0 {
                let step = if s[i - 1] == t[j - 1] { 0.0 } else { sub[(i - 1) * m + j - 1] };
                best = best.min(d[(i - 1) * w + j - 1] + step);
            }
            if transposable(i, j) {
                best = best.min(d[(i - 2) * w + j - 2] + cfg.transpose_cost);
            }
            if i > 0 {
                best = best.min(d[(i - 1) * w + j] + cfg.delete_cost);
            }
            if j > 0 {
                best = best.min(d[i * w + j - 1] + cfg.insert_cost);
            }
            d[i * w + j] = best;
        }
    }

    let mut ops = Vec::with_capacity(n.max(m));
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        let here = d[i * w + j];
        let close = |v: f64| (v - here).abs() <= EPS;
        let kind = if i > 0 && j > 0 && s[i - 1] == t[j - 1] && close(d[(i - 1) * w + j - 1]) {
            OpKind::Match
        } else if transposable(i, j) && close(d[(i - 2) * w + j - 2] + cfg.transpose_cost) {
            OpKind::Transpose
        } else if i > 0 && j > 0 && s[i - 1] != t[j - 1] && close(d[(i - 1) * w + j - 1] + sub[(i - 1) * m + j - 1]) {
            OpKind::Substitute
        } else if i > 0 && close(d[(i - 1) * w + j] + cfg.delete_cost) {
            OpKind::Delete
        } else {
            OpKind::Insert
        };
        let op = RawOp { kind, src: i - kind_src(kind), tgt: j - kind_tgt(kind) };
        i = op.src;
        j = op.tgt;
        ops.push(op);
    }
    ops.reverse();
    Ok(ops)
}

fn kind_src(k: OpKind) -> usize {
    RawOp { kind: k, src: 0, tgt: 0 }.src_len()
}

fn kind_tgt(k: OpKind) -> usize {
    RawOp { kind: k, src: 0, tgt: 0 }.tgt_len()
}

/// A merged edit before it is turned into an [`Edit`]: token ranges on both
/// sides and the range of script steps it covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EditSpan {
    pub src: (usize, usize),
    pub tgt: (usize, usize),
    pub ops: (usize, usize),
}

fn span_of(ops: &[RawOp], a: usize, b: usize) -> EditSpan {
    let first = ops[a];
    let last = ops[b - 1];
    EditSpan {
        src: (first.src, last.src + last.src_len()),
        tgt: (first.tgt, last.tgt + last.tgt_len()),
        ops: (a, b),
    }
}

/// Groups non-match steps into edit spans.
///
/// Mixed runs merge, pure insert or delete runs merge, and neighbours merge
/// when their combined target side is one lexicon word. A span whose target
/// boundary falls inside a lexicon word of the corrected sentence is widened
/// over matched tokens up to that word's boundary.
pub fn merge_spans(ops: &[RawOp], tgt: &Segmentation, lex: &Lexicon) -> Vec<EditSpan> {
    let mut groups: Vec<(usize, usize)> = Vec::new();
    let mut k = 0;
    while k < ops.len() {
        if ops[k].kind == OpKind::Match {
            k += 1;
            continue;
        }
        let a = k;
        while k < ops.len() && ops[k].kind != OpKind::Match {
            k += 1;
        }
        let kinds = &ops[a..k];
        let uniform = kinds.iter().all(|o| o.kind == kinds[0].kind);
        if uniform && matches!(kinds[0].kind, OpKind::Substitute | OpKind::Transpose) {
            groups.extend((a..k).map(|x| (x, x + 1)));
        } else {
            groups.push((a, k));
        }
    }

    let target_text = |a: usize, b: usize| -> String {
        let sp = span_of(ops, a, b);
        tgt.span_text(sp.tgt.0, sp.tgt.1)
    };
    let mut joined: Vec<(usize, usize)> = Vec::with_capacity(groups.len());
    for g in groups {
        if let Some(last) = joined.last_mut() {
            if last.1 == g.0 && lex.contains(&target_text(last.0, g.1)) {
                last.1 = g.1;
                continue;
            }
        }
        joined.push(g);
    }

    widen_to_words(ops, tgt, lex, &mut joined);
    joined.into_iter().map(|(a, b)| span_of(ops, a, b)).collect()
}

fn widen_to_words(ops: &[RawOp], tgt: &Segmentation, lex: &Lexicon, groups: &mut Vec<(usize, usize)>) {
    if groups.is_empty() || tgt.is_empty() {
        return;
    }
    let mut char_at = Vec::with_capacity(tgt.len() + 1);
    let mut acc = 0;
    char_at.push(0);
    for t in &tgt.tokens {
        acc += t.surface.chars().count();
        char_at.push(acc);
    }
    let words = match segment_words(&tgt.joined(), lex) {
        Ok(seg) => seg.tokens.iter().map(|t| (t.char_start, t.char_end)).collect::<Vec<_>>(),
        Err(_) => return,
    };
    let enclosing = |c: usize| words.iter().find(|&&(w0, w1)| w0 < c && c < w1).copied();

    let mut changed = true;
    while changed {
        changed = false;
        let mut g = 0;
        while g < groups.len() {
            let sp = span_of(ops, groups[g].0, groups[g].1);
            let (c0, c1) = (char_at[sp.tgt.0], char_at[sp.tgt.1]);
            let want_left = enclosing(c0).map(|w| w.0);
            let want_right = if c1 > c0 { enclosing(c1).map(|w| w.1) } else { enclosing(c0).map(|w| w.1) };
            if let Some(goal) = want_left {
                if char_at[span_of(ops, groups[g].0, groups[g].1).tgt.0] > goal && groups[g].0 > 0 {
                    if g > 0 && groups[g - 1].1 == groups[g].0 {
                        groups[g - 1].1 = groups[g].1;
                        groups.remove(g);
                        g -= 1;
                    } else {
                        groups[g].0 -= 1;
                    }
                    changed = true;
                    continue;
                }
            }
            if let Some(goal) = want_right {
                if char_at[span_of(ops, groups[g].0, groups[g].1).tgt.1] < goal && groups[g].1 < ops.len() {
                    if g + 1 < groups.len() && groups[g + 1].0 == groups[g].1 {
                        groups[g].1 = groups[g + 1].1;
                        groups.remove(g + 1);
                    } else {
                        groups[g].1 += 1;
                    }
                    changed = true;
                    continue;
                }
            }
            g += 1;
        }
    }
}

/// Merged, unlabeled edits. Replacements join target tokens with spaces.
pub fn merge_edits(ops: &[RawOp], _src: &Segmentation, tgt: &Segmentation, lex: &Lexicon) -> Vec<Edit> {
    merge_spans(ops, tgt, lex)
        .into_iter()
        .map(|sp| Edit::new(sp.src.0, sp.src.1, tgt.span_m2(sp.tgt.0, sp.tgt.1)).expect("span from a non-match step"))
        .collect()
}

fn sorted_chars<'a>(parts: impl Iterator<Item = &'a str>) -> Vec<char> {
    let mut v: Vec<char> = parts.flat_map(str::chars).filter(|c| !c.is_whitespace()).collect();
    v.sort_unstable();
    v
}

/// Collapses runs of edits that only rearrange material into single WO edits.
///
/// Starting from each edit, the shortest run of two or more edits within
/// `window` source tokens whose source and target sides hold the same
/// characters becomes one edit. When the moved blocks share a leading token
/// the span is shifted left to include it.
pub fn detect_word_order(edits: &[Edit], src: &Segmentation, window: usize) -> Vec<Edit> {
    let mut out: Vec<Edit> = Vec::with_capacity(edits.len());
    let mut i = 0;
    while i < edits.len() {
        let mut found = None;
        for j in i + 1..edits.len() {
            if edits[j].end - edits[i].start > window {
                break;
            }
            let target = run_target(&edits[i..=j], src);
            let source_side = sorted_chars(src.tokens[edits[i].start..edits[j].end].iter().map(|t| t.surface.as_str()));
            if source_side == sorted_chars(target.iter().map(String::as_str)) {
                found = Some((j, target));
                break;
            }
        }
        match found {
            Some((j, target)) => {
                let floor = out.last().map(|e| e.end).unwrap_or(0);
                let (start, target) = shift_left(src, edits[i].start, edits[j].end, target, floor);
                let e = Edit::new(start, edits[j].end, target.join(" "))
                    .and_then(|e| e.with_label(EditLabel::Typed(ErrorLabel::word_order())))
                    .map(|e| e.with_annotator(edits[i].annotator));
                match e {
                    Ok(e) => out.push(e),
                    Err(_) => out.extend(edits[i..=j].iter().cloned()),
                }
                i = j + 1;
            }
            None => {
                out.push(edits[i].clone());
                i += 1;
            }
        }
    }
    out
}

fn run_target(run: &[Edit], src: &Segmentation) -> Vec<String> {
    let mut out = Vec::new();
    let mut at = run[0].start;
    for e in run {
        out.extend(src.tokens[at..e.start].iter().map(|t| t.surface.clone()));
        out.extend(e.replacement.split_whitespace().map(str::to_string));
        at = e.end;
    }
    out
}

/// Extends a reordering span left while it can be read as two swapped blocks
/// that both begin with the token just before the span.
fn shift_left(src: &Segmentation, mut start: usize, end: usize, mut target: Vec<String>, floor: usize) -> (usize, Vec<String>) {
    while start > floor {
        let s: Vec<&str> = src.tokens[start..end].iter().map(|t| t.surface.as_str()).collect();
        let prev = src.tokens[start - 1].surface.as_str();
        if !is_swap_with_middle_ending(&s, &target, prev) {
            break;
        }
        start -= 1;
        target.insert(0, prev.to_string());
    }
    (start, target)
}

fn is_swap_with_middle_ending(s: &[&str], t: &[String], last: &str) -> bool {
    let n = s.len();
    if t.len() != n {
        return false;
    }
    for a in 1..n {
        for b in 1..n - a {
            let mid = &s[a..n - b];
            if mid.last() != Some(&last) {
                continue;
            }
            let rebuilt = s[n - b..].iter().chain(mid).chain(&s[..a]);
            if rebuilt.zip(t).all(|(x, y)| *x == y) {
                return true;
            }
        }
    }
    false
}
