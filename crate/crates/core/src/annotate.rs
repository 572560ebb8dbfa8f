//! End-to-end edit extraction: segment, align, merge, detect reordering,
//! classify.

use crate::align::{align, detect_word_order, merge_spans, RawOp};
use crate::classify::classify_edit;
use crate::error::{Error, Result};
use crate::model::{
    apply_edits, AnnotationRecord, CostConfig, Dialect, Edit, EditLabel, Granularity, Segmentation, Thresholds,
};
use crate::resources::{Providers, Resources};
use crate::segment::{parse_presegmented, segment, segment_chars};

/// Default reach of the word-order heuristic, in source tokens.
pub const DEFAULT_WO_WINDOW: usize = 20;

/// Annotation settings plus the tables they run against.
#[derive(Debug, Clone)]
pub struct Annotator {
    resources: Resources,
    pub granularity: Granularity,
    pub thresholds: Thresholds,
    pub cost: CostConfig,
    pub wo_window: usize,
}

impl Annotator {
    pub fn new(resources: Resources) -> Self {
        Annotator {
            resources,
            granularity: Granularity::Character,
            thresholds: Thresholds::default(),
            cost: CostConfig::default(),
            wo_window: DEFAULT_WO_WINDOW,
        }
    }

    /// Annotator over the bundled tables with default settings.
    pub fn bundled() -> Self {
        Annotator::new(Resources::bundled().clone())
    }

    pub fn with_granularity(mut self, granularity: Granularity) -> Self {
        self.granularity = granularity;
        self
    }

    pub fn with_thresholds(mut self, thresholds: Thresholds) -> Self {
        self.thresholds = thresholds;
        self
    }

    pub fn with_cost(mut self, cost: CostConfig) -> Self {
        self.cost = cost;
        self
    }

    pub fn with_window(mut self, window: usize) -> Self {
        self.wo_window = window;
        self
    }

    pub fn resources(&self) -> &Resources {
        &self.resources
    }

    pub fn providers(&self) -> Providers<'_> {
        self.resources.providers()
    }

    fn segment_at(&self, text: &str, granularity: Granularity) -> Result<Segmentation> {
        if text.trim().is_empty() {
            return Ok(Segmentation { text: text.to_string(), tokens: Vec::new(), granularity });
        }
        segment(text, granularity, &self.resources.lexicon)
    }

    /// Classified edits turning `src` into `tgt`.
    pub fn extract(&self, src: &Segmentation, tgt: &Segmentation, annotator: usize) -> Result<Vec<Edit>> {
        let p = self.providers();
        let ops = align(src, tgt, &self.cost, &p)?;
        let merged = merge_spans(&ops, tgt, &self.resources.lexicon)
            .into_iter()
            .map(|sp| Edit::new(sp.src.0, sp.src.1, tgt.span_m2(sp.tgt.0, sp.tgt.1)))
            .collect::<Result<Vec<_>>>()?;
        let reordered = detect_word_order(&merged, src, self.wo_window);
        Ok(self.label(reordered, src, annotator))
    }

    fn label(&self, edits: Vec<Edit>, src: &Segmentation, annotator: usize) -> Vec<Edit> {
        let p = self.providers();
        edits
            .into_iter()
            .map(|mut e| {
                if !matches!(e.label, EditLabel::Opaque(_)) {
                    e.label = EditLabel::Typed(classify_edit(&e, src, &self.thresholds, &p));
                }
                e.annotator = annotator;
                e
            })
            .collect()
    }

    /// Annotates one source against each reference; reference `k` becomes
    /// annotator `k`.
    pub fn annotate(&self, source: &str, references: &[String], dialect: Dialect) -> Result<AnnotationRecord> {
        let src = self.segment_at(source, self.granularity)?;
        if src.is_empty() {
            return Err(Error::EmptyInput);
        }
        let tgts = references
            .iter()
            .map(|r| self.segment_at(r, self.granularity))
            .collect::<Result<Vec<_>>>()?;
        self.annotate_segmented(src, &tgts, dialect)
    }

    /// Like [`Annotator::annotate`] for space-separated pre-tokenized text.
    pub fn annotate_presegmented(&self, source: &str, references: &[String], dialect: Dialect) -> Result<AnnotationRecord> {
        let src = parse_presegmented(source);
        if src.is_empty() {
            return Err(Error::EmptyInput);
        }
        let tgts: Vec<Segmentation> = references.iter().map(|r| parse_presegmented(r)).collect();
        self.annotate_segmented(src, &tgts, dialect)
    }

    fn annotate_segmented(&self, src: Segmentation, tgts: &[Segmentation], dialect: Dialect) -> Result<AnnotationRecord> {
        let mut rec = AnnotationRecord::new(src, dialect);
        for (k, tgt) in tgts.iter().enumerate() {
            let edits = self.extract(&rec.source, tgt, k)?;
            rec.edit_sets.insert(k, edits);
            if dialect == Dialect::Cherrant {
                rec.targets.insert(k, tgt.surfaces().collect::<Vec<_>>().join(" "));
            }
        }
        Ok(rec)
    }

    /// Re-annotates a record at another granularity from the corrected
    /// sentences its edit sets produce.
    pub fn regranularize(&self, record: &AnnotationRecord, granularity: Granularity) -> Result<AnnotationRecord> {
        let source = record.source.joined();
        let src = self.segment_at(&source, granularity)?;
        let mut out = AnnotationRecord::new(src, record.dialect);
        for (&k, edits) in &record.edit_sets {
            let target = apply_edits(&record.source, edits)?;
            let tgt = self.segment_at(&target, granularity)?;
            out.edit_sets.insert(k, self.extract(&out.source, &tgt, k)?);
            if record.dialect == Dialect::Cherrant {
                out.targets.insert(k, tgt.surfaces().collect::<Vec<_>>().join(" "));
            }
        }
        Ok(out)
    }

    /// Character-level gold edits for a corrected sentence whose changes are
    /// located by `spans` (0-based, end-exclusive, over non-whitespace
    /// characters; `start == end` marks an insertion point).
    ///
    /// Each span becomes one edit covering the alignment steps between its
    /// boundaries. Changes outside every span are merged as usual.
    pub fn project_spans(&self, source: &str, reference: &str, spans: &[(usize, usize)]) -> Result<(Segmentation, Vec<Edit>)> {
        let src = segment_chars(source)?;
        let tgt = self.segment_at(reference, Granularity::Character)?;
        let p = self.providers();
        let ops = align(&src, &tgt, &self.cost, &p)?;

        let mut points = Vec::with_capacity(ops.len() + 1);
        let (mut si, mut ti) = (0, 0);
        points.push((0, 0));
        for o in &ops {
            si += o.src_len();
            ti += o.tgt_len();
            points.push((si, ti));
        }
        let first_at = |s: usize, from: usize| (from..points.len()).find(|&k| points[k].0 == s);
        let last_at = |s: usize| (0..points.len()).rev().find(|&k| points[k].0 == s);

        let mut sorted: Vec<(usize, usize)> = spans.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut chunks: Vec<(usize, usize)> = Vec::new();
        let mut floor = 0;
        for &(s, e) in &sorted {
            if s > e || e > src.len() {
                return Err(Error::InvalidEdit(format!("span {s}..{e} outside a sentence of {} characters", src.len())));
            }
            let a = first_at(s, floor).unwrap_or(floor).max(floor);
            let b = last_at(e).unwrap_or(a).max(a);
            chunks.push((a, b));
            floor = b;
        }

        let mut edits = Vec::new();
        let mut at = 0;
        for &(a, b) in &chunks {
            edits.extend(self.merge_gap(&ops[at..a], &tgt));
            if ops[a..b].iter().any(|o| o.kind != crate::align::OpKind::Match) {
                let (s0, t0) = points[a];
                let (s1, t1) = points[b];
                edits.push(Edit::new(s0, s1, tgt.span_m2(t0, t1))?);
            }
            at = b;
        }
        edits.extend(self.merge_gap(&ops[at..], &tgt));
        let edits = self.label(edits, &src, 0);
        Ok((src, edits))
    }

    fn merge_gap(&self, ops: &[RawOp], tgt: &Segmentation) -> Vec<Edit> {
        merge_spans(ops, tgt, &self.resources.lexicon)
            .into_iter()
            .filter_map(|sp| Edit::new(sp.src.0, sp.src.1, tgt.span_m2(sp.tgt.0, sp.tgt.1)).ok())
            .collect()
    }
}
