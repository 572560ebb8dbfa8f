//! Checks against the worked figures: m2 layouts, scoring, reordering,
//! corpus ingestion and the classification anchors.

use std::fs;

use zhgec::annotate::Annotator;
use zhgec::classify::classify_edit;
use zhgec::diff::{diff_records, Category};
use zhgec::ingest::{parse, CorpusFormat};
use zhgec::m2::{parse_m2, write_m2};
use zhgec::model::{apply_edits, Dialect, Edit, ErrorLabel, Granularity, Op, Thresholds};
use zhgec::score::score_corpus;
use zhgec::phonosim::Similarity;
use zhgec::segment::segment_chars;
use zhgec::Providers;

fn fixture(name: &str) -> String {
    fs::read_to_string(format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

#[test]
fn m2_figures_round_trip_byte_identically() {
    for name in ["chinese_m2_char.m2", "chinese_m2_word.m2", "differences_cherrant.m2", "differences_refined.m2"] {
        let text = fixture(name);
        let records = parse_m2(&text).unwrap();
        let dialect = records[0].dialect;
        assert_eq!(write_m2(&records, dialect).unwrap(), text, "{name}");
    }
}

#[test]
fn figure_dialects_are_detected() {
    assert_eq!(parse_m2(&fixture("differences_cherrant.m2")).unwrap()[0].dialect, Dialect::Cherrant);
    assert_eq!(parse_m2(&fixture("differences_refined.m2")).unwrap()[0].dialect, Dialect::Refined);
}

#[test]
fn worked_example_scores() {
    let a = Annotator::bundled();
    let r = score_corpus(&fixture("worked_system.m2"), &fixture("worked_gold.m2"), 0.5, None, &a).unwrap();
    assert_eq!((r.counts.tp, r.counts.fp, r.counts.fn_), (1, 0, 1));
    assert_eq!(r.precision, 1.0);
    assert_eq!(r.recall, 0.5);
    assert!((r.f_beta - 5.0 / 6.0).abs() < 1e-12);
    assert!((r.counts.f_beta(1.0) - 2.0 / 3.0).abs() < 1e-12);
    assert!((r.f_beta - 0.83).abs() < 5e-3);
    assert!(r.to_lines().contains("F0.5\t0.8333\n"));
}

#[test]
fn switch_becomes_one_word_order_edit() {
    let manual = parse_m2(&fixture("switch_manual.m2")).unwrap();
    let rec = &manual[0];
    let target = rec.targets[&0].clone();
    let source: Vec<&str> = rec.source.surfaces().collect();
    let a = Annotator::bundled().with_granularity(Granularity::Word);
    let auto = a.annotate_presegmented(&source.join(" "), &[target], Dialect::Refined).unwrap();
    let edits = auto.edits(0);
    assert_eq!(edits.len(), 1, "{edits:?}");
    assert_eq!((edits[0].start, edits[0].end), (21, 37));
    assert_eq!(edits[0].label.typed(), Some(ErrorLabel::word_order()));
}

#[test]
fn switch_auto_figure_has_four_substitutions() {
    let rec = &parse_m2(&fixture("switch_auto.m2")).unwrap()[0];
    assert_eq!(rec.edits(0).len(), 4);
    assert!(rec.edits(0).iter().all(|e| e.shape_op() == Op::R));
}

fn located(format: CorpusFormat, file: &str) -> Vec<(String, String)> {
    let a = Annotator::bundled();
    let mut out = Vec::new();
    for item in parse(&fixture(file), format, &a).unwrap() {
        let gold = item.gold.expect("located corpus");
        let src = segment_chars(&item.pair.source).unwrap();
        for (edits, reference) in gold.iter().zip(&item.pair.references) {
            out.push((apply_edits(&src, edits).unwrap(), reference.clone()));
        }
    }
    out
}

#[test]
fn located_gold_edits_rebuild_the_reference() {
    for (format, file, expect) in [
        (CorpusFormat::Fcgec, "fcgec.json", "中央政法委书记罗干同志对因公殉职的公安干警表示崇高的敬意并对他们的家属致以亲切的慰问。"),
        (CorpusFormat::Flacgec, "flacgec.json", "可是后来，他们再来镇上，西瓜总是第一个卖完。"),
        (CorpusFormat::Cctc, "cctc.json", "一是为了避免不必要麻烦,二是一旦被认出来难免需要签名或者合影,会耽误明星自己的时间。"),
        (
            CorpusFormat::Cged2016Plus,
            "cged2016.xml",
            "例如：青少年吸烟不仅是对他本身还会对社会的未来发展有害。 因为青少年是未来社会的主要发展原因之一。",
        ),
        (CorpusFormat::Cged2020, "cged2020.xml", "1973年邻居们一知道我母亲生了一个女孩时，纷纷来看父亲，表示对他的同情。"),
    ] {
        let pairs = located(format, file);
        assert!(!pairs.is_empty(), "{file}");
        let last = pairs.iter().find(|(_, r)| r == expect).unwrap_or_else(|| panic!("{file}: {pairs:?}"));
        assert_eq!(last.0, last.1, "{file}");
        for (rebuilt, reference) in &pairs {
            assert_eq!(rebuilt, reference, "{file}");
        }
    }
}

fn label_of(src: &str, start: usize, end: usize, rep: &str) -> ErrorLabel {
    let a = Annotator::bundled();
    let seg = segment_chars(src).unwrap();
    classify_edit(&Edit::new(start, end, rep).unwrap(), &seg, &Thresholds::default(), &a.providers())
}

#[test]
fn classification_anchors_without_shape() {
    assert_eq!(label_of("我一前没住过", 1, 3, "以 前").to_string(), "R:PINYIN");
    assert_eq!(label_of("美丽得花", 2, 3, "的").to_string(), "R:DE");
    assert_eq!(label_of("我的好朋友", 2, 2, "的").to_string(), "M:DE");
    assert_eq!(label_of("你在干么什", 3, 5, "什 么").to_string(), "R:CO");
    assert_eq!(label_of("我很惊讶了。", 4, 5, "").to_string(), "U:PART");
}

/// Scores the figure's glyph confusions as near-identical and everything
/// else as unrelated.
struct StubShape;

impl Similarity for StubShape {
    fn similarity(&self, a: &str, b: &str) -> f64 {
        let pairs = [("西", "四"), ("州", "洲"), ("欧州", "欧洲")];
        if a == b || pairs.iter().any(|&(x, y)| (x, y) == (a, b) || (y, x) == (a, b)) {
            1.0
        } else {
            0.0
        }
    }
}

#[test]
fn shape_branches_with_a_stub_provider() {
    let a = Annotator::bundled();
    let p = Providers { shape: &StubShape, ..a.providers() };
    let th = Thresholds::default();
    let run = |src: &str, s: usize, e: usize, rep: &str| {
        classify_edit(&Edit::new(s, e, rep).unwrap(), &segment_chars(src).unwrap(), &th, &p).to_string()
    };
    assert_eq!(run("她有西个哥哥", 2, 3, "四"), "R:SHAPE");
    assert_eq!(run("我去欧州旅游", 2, 4, "欧 洲"), "R:MULTI");
    assert_eq!(run("我一前没住过", 1, 3, "以 前"), "R:PINYIN");
}

#[test]
fn diff_separates_the_three_mismatch_classes() {
    let pairs = [
        ("type_a.m2", "type_b.m2", Category::TypeOnly),
        ("boundary_auto.m2", "boundary_manual.m2", Category::BoundaryOnly),
        ("switch_manual.m2", "switch_auto.m2", Category::OrderRepresentation),
    ];
    for (a, b, cat) in pairs {
        let report = diff_records(&parse_m2(&fixture(a)).unwrap(), &parse_m2(&fixture(b)).unwrap()).unwrap();
        assert_eq!(report.mismatches.len(), 1, "{a}: {report:?}");
        assert_eq!(report.mismatches[0].category, cat, "{a}");
    }
}
