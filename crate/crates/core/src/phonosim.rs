//! Pinyin and glyph-shape similarity.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// A pairwise similarity score in `[0, 1]`.
pub trait Similarity: Send + Sync {
    fn similarity(&self, a: &str, b: &str) -> f64;
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Syllable {
    pub base: String,
    pub tone: u8,
}

/// Character readings. Comparison ignores tones.
#[derive(Debug, Clone, Default)]
pub struct PinyinLexicon {
    readings: HashMap<char, Vec<Syllable>>,
    toneless: HashMap<char, Box<[u32]>>,
    interned: HashMap<String, u32>,
}

impl PinyinLexicon {
    /// Parses `char<TAB>reading1,reading2` lines, readings like `yi3`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lex = PinyinLexicon::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, rest) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(i + 1, "expected char<TAB>readings"))?;
            let mut it = key.chars();
            let ch = match (it.next(), it.next()) {
                (Some(c), None) => c,
                _ => return Err(Error::parse(i + 1, format!("key {key:?} is not one character"))),
            };
            let mut syls = Vec::new();
            for r in rest.split(',') {
                syls.push(parse_syllable(r.trim()).ok_or_else(|| Error::parse(i + 1, format!("bad reading {r:?}")))?);
            }
            lex.insert(ch, syls);
        }
        Ok(lex)
    }

    fn insert(&mut self, ch: char, syls: Vec<Syllable>) {
        let mut ids: Vec<u32> = syls
            .iter()
            .map(|s| {
                let next = self.interned.len() as u32;
                *self.interned.entry(s.base.clone()).or_insert(next)
            })
            .collect();
        ids.sort_unstable();
        ids.dedup();
        self.toneless.insert(ch, ids.into_boxed_slice());
        self.readings.insert(ch, syls);
    }

    pub fn readings(&self, ch: char) -> Option<&[Syllable]> {
        self.readings.get(&ch).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.readings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.readings.is_empty()
    }

    /// True when both characters can be read as the same toneless syllable.
    /// A character without readings only matches itself.
    fn sounds_alike(&self, a: char, b: char) -> bool {
        if a == b {
            return true;
        }
        match (self.toneless.get(&a), self.toneless.get(&b)) {
            (Some(x), Some(y)) => sorted_intersect(x, y),
            _ => false,
        }
    }
}

fn parse_syllable(r: &str) -> Option<Syllable> {
    let (base, tone) = match r.char_indices().last() {
        Some((i, d)) if d.is_ascii_digit() => (&r[..i], d.to_digit(10)? as u8),
        _ => (r, 0),
    };
    if base.is_empty() || tone > 4 || !base.chars().all(|c| c.is_ascii_lowercase()) {
        return None;
    }
    Some(Syllable { base: base.to_string(), tone })
}

fn sorted_intersect(a: &[u32], b: &[u32]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Equal => return true,
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
        }
    }
    false
}

fn content_chars(s: &str) -> Vec<char> {
    s.chars().filter(|c| !c.is_whitespace()).collect()
}

/// `1 - lev / max_len` over toneless syllable sequences, choosing for each
/// character whichever reading lowers the distance.
pub fn pinyin_similarity(a: &str, b: &str, lex: &PinyinLexicon) -> f64 {
    let (a, b) = (content_chars(a), content_chars(b));
    let longest = a.len().max(b.len());
    if longest == 0 {
        return 1.0;
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for i in 1..=a.len() {
        cur[0] = i;
        for j in 1..=b.len() {
            let sub = prev[j - 1] + usize::from(!lex.sounds_alike(a[i - 1], b[j - 1]));
            cur[j] = sub.min(prev[j] + 1).min(cur[j - 1] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    1.0 - prev[b.len()] as f64 / longest as f64
}

impl Similarity for PinyinLexicon {
    fn similarity(&self, a: &str, b: &str) -> f64 {
        pinyin_similarity(a, b, self)
    }
}

/// How glyph components are collected and weighed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeParams {
    /// Levels of decomposition to expand below the character itself.
    pub depth: usize,
    /// Whether intermediate components count alongside the leaves.
    pub internal: bool,
    /// Weight of the component Dice term; the stroke ratio gets the rest.
    pub dice_weight: f64,
}

impl Default for ShapeParams {
    /// Values frozen from the calibration harness in `tests/calibration.rs`.
    fn default() -> Self {
        ShapeParams { depth: 2, internal: true, dice_weight: 1.0 }
    }
}

#[derive(Debug, Clone)]
struct GlyphFeatures {
    components: Box<[u32]>,
    strokes: Option<u32>,
}

/// Recursive component decomposition plus stroke counts.
#[derive(Debug, Clone, Default)]
pub struct GlyphModel {
    children: HashMap<u32, Vec<u32>>,
    strokes: HashMap<u32, u32>,
    ids: HashMap<String, u32>,
    params: ShapeParams,
    features: HashMap<char, GlyphFeatures>,
}

impl GlyphModel {
    /// Parses `key<TAB>components<TAB>strokes` lines. Keys are characters or
    /// numbered sub-glyphs; components are space separated keys.
    pub fn parse(text: &str, params: ShapeParams) -> Result<Self> {
        let mut model = GlyphModel { params, ..GlyphModel::default() };
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 3 || cols[0].is_empty() {
                return Err(Error::parse(i + 1, "expected key<TAB>components<TAB>strokes"));
            }
            let strokes: u32 = cols[2]
                .trim()
                .parse()
                .ok()
                .filter(|&s| s >= 1)
                .ok_or_else(|| Error::parse(i + 1, format!("bad stroke count {:?}", cols[2])))?;
            let key = model.intern(cols[0]);
            let kids: Vec<u32> = cols[1].split_whitespace().map(|c| model.intern(c)).collect();
            model.children.entry(key).or_insert(kids);
            model.strokes.entry(key).or_insert(strokes);
        }
        model.rebuild();
        Ok(model)
    }

    fn intern(&mut self, key: &str) -> u32 {
        let next = self.ids.len() as u32;
        *self.ids.entry(key.to_string()).or_insert(next)
    }

    pub fn params(&self) -> ShapeParams {
        self.params
    }

    pub fn with_params(mut self, params: ShapeParams) -> Self {
        let structural = (params.depth, params.internal) != (self.params.depth, self.params.internal);
        self.params = params;
        if structural {
            self.rebuild();
        }
        self
    }

    fn rebuild(&mut self) {
        let mut features = HashMap::new();
        for (key, &id) in &self.ids {
            let mut it = key.chars();
            if let (Some(c), None) = (it.next(), it.next()) {
                features.insert(c, self.compute(id));
            }
        }
        self.features = features;
    }

    fn compute(&self, id: u32) -> GlyphFeatures {
        let mut comps = Vec::new();
        match self.children.get(&id) {
            Some(kids) if !kids.is_empty() => {
                for &k in kids {
                    self.collect(k, self.params.depth.saturating_sub(1), &mut comps);
                }
            }
            _ => comps.push(id),
        }
        comps.sort_unstable();
        GlyphFeatures { components: comps.into_boxed_slice(), strokes: self.strokes.get(&id).copied() }
    }

    fn collect(&self, id: u32, depth: usize, out: &mut Vec<u32>) {
        match self.children.get(&id) {
            Some(kids) if !kids.is_empty() && depth > 0 => {
                if self.params.internal {
                    out.push(id);
                }
                for &k in kids {
                    self.collect(k, depth - 1, out);
                }
            }
            _ => out.push(id),
        }
    }

    /// Component multiset of one character, as keys. Characters without
    /// decomposition data decompose to themselves.
    pub fn components(&self, ch: char) -> Vec<String> {
        let names: HashMap<u32, &str> = self.ids.iter().map(|(k, &v)| (v, k.as_str())).collect();
        match self.features.get(&ch) {
            Some(f) => f.components.iter().map(|id| names[id].to_string()).collect(),
            None => vec![ch.to_string()],
        }
    }

    pub fn strokes(&self, ch: char) -> Option<u32> {
        self.features.get(&ch).and_then(|f| f.strokes)
    }

    pub fn char_similarity(&self, a: char, b: char) -> f64 {
        if a == b {
            return 1.0;
        }
        let (fa, fb) = (self.features.get(&a), self.features.get(&b));
        let dice = match (fa, fb) {
            (Some(x), Some(y)) => dice(&x.components, &y.components),
            _ => 0.0,
        };
        let stroke = match (fa.and_then(|f| f.strokes), fb.and_then(|f| f.strokes)) {
            (Some(x), Some(y)) => 1.0 - x.abs_diff(y) as f64 / x.max(y) as f64,
            _ => 0.0,
        };
        let w = self.params.dice_weight;
        (w * dice + (1.0 - w) * stroke).clamp(0.0, 1.0)
    }
}

fn dice(a: &[u32], b: &[u32]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    let (mut i, mut j, mut shared) = (0, 0, 0usize);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Equal => {
                shared += 1;
                i += 1;
                j += 1;
            }
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
        }
    }
    2.0 * shared as f64 / (a.len() + b.len()) as f64
}

/// Position-wise mean of per-character glyph similarity; 0 for unequal lengths.
pub fn shape_similarity(a: &str, b: &str, model: &GlyphModel) -> f64 {
    let (a, b) = (content_chars(a), content_chars(b));
    if a.len() != b.len() {
        return 0.0;
    }
    if a.is_empty() {
        return 1.0;
    }
    let total: f64 = a.iter().zip(&b).map(|(&x, &y)| model.char_similarity(x, y)).sum();
    total / a.len() as f64
}

impl Similarity for GlyphModel {
    fn similarity(&self, a: &str, b: &str) -> f64 {
        shape_similarity(a, b, self)
    }
}
