//! One pass/fail line per acceptance criterion. The test fails if any
//! criterion fails.

#[path = "../../core/tests/support/calibration_set.rs"]
mod calibration_set;
#[path = "../../core/tests/support/oracle.rs"]
mod oracle;

use std::fs;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zhgec::align::{align, merge_edits, script_cost};
use zhgec::annotate::Annotator;
use zhgec::classify::classify_edit;
use zhgec::ingest::{parse, CorpusFormat};
use zhgec::m2::{parse_m2, write_m2};
use zhgec::model::{apply_edits, CostConfig, Dialect, Edit, ErrorLabel, Granularity, Segmentation, Thresholds};
use zhgec::phonosim::{GlyphModel, ShapeParams};
use zhgec::score::score_corpus;
use zhgec::segment::{segment, segment_chars};
use zhgec::Resources;

fn fixture(name: &str) -> String {
    fs::read_to_string(fixture_path(name)).unwrap()
}

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn worked_example() -> Verdict {
    let t = Instant::now();
    let a = Annotator::bundled();
    let r = score_corpus(&fixture("worked_system.m2"), &fixture("worked_gold.m2"), 0.5, None, &a).unwrap();
    let f1 = r.counts.f_beta(1.0);
    let exact = r.precision == 1.0 && r.recall == 0.5 && close(f1, 2.0 / 3.0, 1e-12) && close(r.f_beta, 5.0 / 6.0, 1e-12);
    let rounded = close(f1, 0.67, 5e-3) && close(r.f_beta, 0.83, 5e-3);
    let fast = t.elapsed() < Duration::from_secs(1);
    verdict(
        exact && rounded && fast,
        format!("P={:.4} R={:.4} F1={:.4} F0.5={:.4} in {:?}", r.precision, r.recall, f1, r.f_beta, t.elapsed()),
    )
}

fn classification_suite() -> Verdict {
    let a = Annotator::bundled();
    let p = a.providers();
    let th = Thresholds::default();
    let cases: [(&str, usize, usize, &str, &str); 7] = [
        ("我一前没住过五星级旅馆", 1, 3, "以 前", "R:PINYIN"),
        ("她有两个姐姐、一个妹妹和西个哥哥", 12, 13, "四", "R:SHAPE"),
        ("从十六世纪开始，欧州人就抽烟", 8, 10, "欧 洲", "R:MULTI"),
        ("他跑得很快，美丽得花", 8, 9, "的", "R:DE"),
        ("但是很会唱歌就被淘汰了", 6, 6, "的", "M:DE"),
        ("你在干么什", 3, 5, "什 么", "R:CO"),
        ("所以我很惊讶了。", 6, 7, "", "U:PART"),
    ];
    let mut ok = 0;
    let mut misses = Vec::new();
    for (src, s, e, rep, want) in cases {
        let got = classify_edit(&Edit::new(s, e, rep).unwrap(), &segment_chars(src).unwrap(), &th, &p).to_string();
        if got == want {
            ok += 1;
        } else {
            misses.push(format!("{}->{} got {got}, want {want}", segment_chars(src).unwrap().span_text(s, e), rep.replace(' ', "")));
        }
    }
    let detail = if misses.is_empty() { "7/7".to_string() } else { format!("{ok}/7; {}", misses.join("; ")) };
    verdict(ok == 7, detail)
}

fn shape_calibration() -> Verdict {
    let model = GlyphModel::parse(Resources::glyph_table_text(), ShapeParams::default()).unwrap();
    let o = calibration_set::evaluate(&model, &calibration_set::unrelated_pairs());
    verdict(
        o.separates(),
        format!(
            "min confusion {:.3} (need > 0.9), max unrelated {:.3} (need < 0.5), {}/105 pairs satisfied",
            o.min_confusion, o.max_unrelated, o.satisfied
        ),
    )
}

fn m2_round_trip() -> Verdict {
    let names = ["chinese_m2_char.m2", "chinese_m2_word.m2", "differences_cherrant.m2", "differences_refined.m2"];
    let mut bad = Vec::new();
    for name in names {
        let text = fixture(name);
        let same = parse_m2(&text).ok().and_then(|r| write_m2(&r, r[0].dialect).ok()).map(|out| out == text);
        if same != Some(true) {
            bad.push(name);
        }
    }
    verdict(bad.is_empty(), if bad.is_empty() { "4/4 files byte-identical".into() } else { format!("differs: {bad:?}") })
}

fn alignment_oracle() -> Verdict {
    let a = Annotator::bundled();
    let p = a.providers();
    let cfg = CostConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut optimal = 0;
    for _ in 0..1000 {
        let mut draw = || -> Vec<&str> {
            let n = rng.gen_range(0..=8);
            (0..n).map(|_| oracle::ALPHABET[rng.gen_range(0..oracle::ALPHABET.len())]).collect()
        };
        let (s, t) = (draw(), draw());
        let (ss, tt) = (Segmentation::from_surfaces(&s, Granularity::Character), Segmentation::from_surfaces(&t, Granularity::Character));
        let ops = align(&ss, &tt, &cfg, &p).unwrap();
        if close(script_cost(&ops, &ss, &tt, &cfg, &p), oracle::exhaustive(&s, &t, &cfg, &p), 1e-9) {
            optimal += 1;
        }
    }
    let lex = a.resources().lexicon.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut rebuilt = 0;
    for case in 0..10_000 {
        let source = oracle::SENTENCES[case % oracle::SENTENCES.len()];
        let mut chars: Vec<char> = source.chars().collect();
        for _ in 0..rng.gen_range(1..=4) {
            oracle::mutate(&mut rng, &mut chars);
        }
        let target: String = chars.into_iter().collect();
        let gran = if case % 2 == 0 { Granularity::Character } else { Granularity::Word };
        let (src, tgt) = (segment(source, gran, &lex).unwrap(), segment(&target, gran, &lex).unwrap());
        let ops = align(&src, &tgt, &a.cost, &p).unwrap();
        if apply_edits(&src, &merge_edits(&ops, &src, &tgt, &lex)).ok().as_deref() == Some(target.as_str()) {
            rebuilt += 1;
        }
    }
    verdict(optimal == 1000 && rebuilt == 10_000, format!("cost-optimal {optimal}/1000, reconstructed {rebuilt}/10000"))
}

fn ingestion_reconstruction() -> Verdict {
    let a = Annotator::bundled();
    let cases = [
        (CorpusFormat::Fcgec, "fcgec.json"),
        (CorpusFormat::Flacgec, "flacgec.json"),
        (CorpusFormat::Cctc, "cctc.json"),
        (CorpusFormat::Cged2016Plus, "cged2016.xml"),
        (CorpusFormat::Cged2020, "cged2020.xml"),
    ];
    let mut bad = Vec::new();
    for (format, name) in cases {
        let items = parse(&fixture(name), format, &a).unwrap();
        let all = items.iter().all(|it| {
            let src = segment_chars(&it.pair.source).unwrap();
            let gold = it.gold.as_ref().expect("located");
            !gold.is_empty()
                && gold.iter().zip(&it.pair.references).all(|(e, r)| apply_edits(&src, e).ok().as_deref() == Some(r.as_str()))
        });
        if !all {
            bad.push(name);
        }
    }
    verdict(bad.is_empty(), if bad.is_empty() { "5/5 formats".into() } else { format!("mismatch: {bad:?}") })
}

fn word_order() -> Verdict {
    let rec = &parse_m2(&fixture("switch_manual.m2")).unwrap()[0];
    let source: Vec<&str> = rec.source.surfaces().collect();
    let a = Annotator::bundled().with_granularity(Granularity::Word);
    let auto = a.annotate_presegmented(&source.join(" "), &[rec.targets[&0].clone()], Dialect::Refined).unwrap();
    let e = auto.edits(0);
    let ok = e.len() == 1 && (e[0].start, e[0].end) == (21, 37) && e[0].label.typed() == Some(ErrorLabel::word_order());
    let shown: Vec<String> = e.iter().map(|e| format!("{} {} {}", e.start, e.end, e.label)).collect();
    verdict(ok, shown.join("; "))
}

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_zhgec"));
    c.env("ZHGEC_CONFIG_DIR", env!("CARGO_MANIFEST_DIR"));
    c
}

fn diff_categories() -> Verdict {
    let cases = [
        ("switch_manual.m2", "switch_auto.m2", "order-representation"),
        ("boundary_auto.m2", "boundary_manual.m2", "boundary-only"),
        ("type_a.m2", "type_b.m2", "type-only"),
    ];
    let mut got = Vec::new();
    let mut ok = true;
    for (a, b, want) in cases {
        let out = bin().args(["diff"]).arg(fixture_path(a)).arg(fixture_path(b)).output().unwrap();
        let text = String::from_utf8_lossy(&out.stdout);
        let hit = out.status.success() && text.contains(&format!("{want}\t1\n")) && text.contains(&format!("\t{want}\t"));
        ok &= hit;
        got.push(format!("{want}={}", if hit { "ok" } else { "missed" }));
    }
    verdict(ok, format!("word-order {}; {}", if word_order().pass { "ok" } else { "missed" }, got.join(", ")))
}

/// Synthetic pairs of at most 50 characters.
fn synthetic_corpus(n: usize) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut out = String::new();
    for i in 0..n {
        let base: Vec<char> = oracle::SENTENCES[rng.gen_range(0..oracle::SENTENCES.len())].chars().take(50).collect();
        let mut tgt = base.clone();
        for _ in 0..rng.gen_range(0..=3) {
            oracle::mutate(&mut rng, &mut tgt);
        }
        tgt.truncate(50);
        out.push_str(&format!("{i}\t{}\t{}\n", base.iter().collect::<String>(), tgt.iter().collect::<String>()));
    }
    out
}

fn throughput() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("pairs.tsv");
    fs::write(&input, synthetic_corpus(10_000)).unwrap();
    let run = |threads: &str| {
        let t = Instant::now();
        let out = bin().args(["annotate", "--parallel"]).arg(&input).args(["--threads", threads]).output().unwrap();
        (out.status.success(), out.stdout, t.elapsed())
    };
    let (ok1, one, elapsed) = run("1");
    let (ok4, four, _) = run("4");
    let (ok8, eight, _) = run("8");
    let deterministic = ok1 && ok4 && ok8 && one == four && one == eight;
    let fast = elapsed < Duration::from_secs(60);
    verdict(
        deterministic && fast,
        format!("10000 pairs in {:.1}s single-threaded; identical output for 1/4/8 threads: {deterministic}", elapsed.as_secs_f64()),
    )
}

type Criterion = (&'static str, fn() -> Verdict);

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("m2 worked example", worked_example),
        ("classification suite", classification_suite),
        ("shape calibration", shape_calibration),
        ("m2 round trip", m2_round_trip),
        ("alignment oracle", alignment_oracle),
        ("ingestion reconstruction", ingestion_reconstruction),
        ("word-order heuristic", word_order),
        ("agreement categories", diff_categories),
        ("throughput", throughput),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        println!("criterion {} {}: {} ({})", i + 1, name, if v.pass { "PASS" } else { "FAIL" }, v.detail);
        if !v.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
