//! `zhgec`: annotate, score, convert and compare Chinese GEC data.

mod config;

use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use zhgec::annotate::Annotator;
use zhgec::diff::diff_records;
use zhgec::ingest::{self, parse_cged, CorpusFormat, Item};
use zhgec::m2::{parse_m2, write_m2};
use zhgec::model::{AnnotationRecord, Dialect, Granularity, Thresholds};
use zhgec::score::{detection_levels, parse_cged_result, score_corpus, Counts, TypedSpan};
use zhgec::stats::CorpusStats;
use zhgec::Resources;

use config::Config;

#[derive(Parser)]
#[command(name = "zhgec", version, about = "Edit extraction, classification and scoring for Chinese GEC")]
struct Cli {
    /// Settings file (`key = value`); defaults to `$ZHGEC_CONFIG_DIR/config`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Align sources with corrections and write classified m2.
    Annotate(AnnotateArgs),
    /// Score system m2 against gold m2.
    Score(ScoreArgs),
    /// Read a corpus file and emit parallel lines or m2.
    Convert(ConvertArgs),
    /// Compare two annotations of the same sentences.
    Diff(DiffArgs),
    /// Summarize a corpus or m2 file.
    Stats(StatsArgs),
    /// Detection, identification and position scores for CGED output.
    CgedScore(CgedArgs),
}

#[derive(Args, Clone)]
struct Settings {
    /// Token granularity: char or word.
    #[arg(long)]
    granularity: Option<Granularity>,
    /// Pinyin similarity threshold.
    #[arg(long)]
    alpha1: Option<f64>,
    /// Shape similarity threshold.
    #[arg(long)]
    alpha2: Option<f64>,
    /// Lexicon file (`word<TAB>POS` lines) replacing the bundled one.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct AnnotateArgs {
    /// Source sentences, one per line (`-` for stdin).
    #[arg(long, requires = "hyp", conflicts_with = "parallel")]
    src: Option<PathBuf>,
    /// Corrections, one per line, matching --src.
    #[arg(long, requires = "src")]
    hyp: Option<PathBuf>,
    /// `id<TAB>source<TAB>reference…` lines.
    #[arg(long)]
    parallel: Option<PathBuf>,
    /// m2 dialect: cherrant or refined.
    #[arg(long)]
    dialect: Option<Dialect>,
    /// Input is already split into space-separated words.
    #[arg(long)]
    presegmented: bool,
    /// Output file instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[command(flatten)]
    settings: Settings,
}

#[derive(Args)]
struct ScoreArgs {
    /// System m2 (`-` for stdin).
    hyp: PathBuf,
    /// Gold m2 with one or more annotator sets per sentence.
    gold: PathBuf,
    /// Weight of recall in F; defaults to 0.5.
    #[arg(long)]
    beta: Option<f64>,
    /// Re-annotate records at this granularity before scoring.
    #[arg(long)]
    granularity: Option<Granularity>,
    /// Aligned table instead of `metric<TAB>value` lines.
    #[arg(long)]
    table: bool,
}

#[derive(Args)]
struct ConvertArgs {
    /// Corpus file (`-` for stdin).
    input: PathBuf,
    /// cged2014, cged2015, cged2016plus, cged2020, nlpcc-train, nlpcc-seg,
    /// fcgec, flacgec, yaclc, cctc, nacgec, cefe, parallel or mucgec.
    #[arg(long)]
    format: CorpusFormat,
    /// Output kind: parallel or m2.
    #[arg(long, default_value = "parallel")]
    emit: Emit,
    /// m2 dialect for --emit m2: cherrant or refined.
    #[arg(long)]
    dialect: Option<Dialect>,
    /// Output file instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[command(flatten)]
    settings: Settings,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Emit {
    Parallel,
    M2,
}

#[derive(Args)]
struct DiffArgs {
    /// First m2 file.
    a: PathBuf,
    /// Second m2 file over the same sources.
    b: PathBuf,
}

#[derive(Args)]
struct StatsArgs {
    /// Corpus or m2 file (`-` for stdin).
    input: PathBuf,
    /// A corpus format or `m2`; guessed from the first line when omitted.
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct CgedArgs {
    /// System output: `id, start, end, type` or `id, correct` lines.
    system: PathBuf,
    /// Gold file in the same layout, or CGED XML with --gold-format.
    gold: PathBuf,
    /// CGED variant of an XML gold file.
    #[arg(long)]
    gold_format: Option<CorpusFormat>,
}

enum Failure {
    Usage(String),
    Data(String),
}

impl From<zhgec::Error> for Failure {
    fn from(e: zhgec::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = Config::load(cli.config.as_deref()).map_err(Failure::Usage).and_then(|cfg| run(cli.command, &cfg));
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error\tusage\t{m}");
            ExitCode::from(1)
        }
        Err(Failure::Data(m)) => {
            eprintln!("error\tdata\t{m}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command, cfg: &Config) -> CmdResult {
    match cmd {
        Command::Annotate(a) => cmd_annotate(a, cfg),
        Command::Score(a) => cmd_score(a, cfg),
        Command::Convert(a) => cmd_convert(a, cfg),
        Command::Diff(a) => cmd_diff(a),
        Command::Stats(a) => cmd_stats(a),
        Command::CgedScore(a) => cmd_cged_score(a),
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    if path == Path::new("-") {
        io::stdin().read_to_string(&mut text).map_err(|e| Failure::Data(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    }
    Ok(text.strip_prefix('\u{feff}').map(str::to_string).unwrap_or(text))
}

fn write_output(path: Option<&Path>, text: &str) -> CmdResult {
    match path {
        Some(p) if p != Path::new("-") => {
            std::fs::write(p, text).map_err(|e| Failure::Data(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| Failure::Data(format!("stdout: {e}")))
        }
    }
}

fn annotator(s: &Settings, cfg: &Config) -> Result<Annotator, Failure> {
    let resources = match s.lexicon.as_ref().or(cfg.lexicon.as_ref()) {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
            Resources::with_lexicon_text(&text).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?
        }
        None => Resources::bundled().clone(),
    };
    let defaults = Thresholds::default();
    let th = Thresholds::new(
        s.alpha1.or(cfg.alpha1).unwrap_or(defaults.alpha1),
        s.alpha2.or(cfg.alpha2).unwrap_or(defaults.alpha2),
    )
    .map_err(|e| Failure::Usage(e.to_string()))?;
    let mut a = Annotator::new(resources)
        .with_granularity(s.granularity.or(cfg.granularity).unwrap_or(Granularity::Character))
        .with_thresholds(th);
    if let Some(w) = cfg.wo_window {
        a = a.with_window(w);
    }
    Ok(a)
}

fn pool(s: &Settings, cfg: &Config) -> Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(s.threads.or(cfg.threads).unwrap_or(1))
        .build()
        .map_err(|e| Failure::Usage(format!("thread pool: {e}")))
}

fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect()
}

fn cmd_annotate(a: AnnotateArgs, cfg: &Config) -> CmdResult {
    let dialect = a.dialect.or(cfg.dialect).unwrap_or(Dialect::Refined);
    let ann = annotator(&a.settings, cfg)?;
    let jobs: Vec<(usize, String, Vec<String>)> = match (&a.parallel, &a.src, &a.hyp) {
        (Some(p), None, None) => {
            let text = read_input(p)?;
            let mut jobs = Vec::new();
            for (no, line) in content_lines(&text) {
                let it = ingest::parse_parallel_line(line).map_err(|e| Failure::Data(format!("line {no}: {e}")))?;
                jobs.push((no, it.pair.source, it.pair.references));
            }
            jobs
        }
        (None, Some(src), Some(hyp)) => {
            let (s, h) = (read_input(src)?, read_input(hyp)?);
            let (s, h): (Vec<&str>, Vec<&str>) = (s.lines().collect(), h.lines().collect());
            if s.len() != h.len() {
                return Err(Failure::Data(format!("--src has {} lines but --hyp has {}", s.len(), h.len())));
            }
            s.iter()
                .zip(&h)
                .enumerate()
                .map(|(i, (x, y))| (i + 1, x.trim_end_matches('\r').to_string(), vec![y.trim_end_matches('\r').to_string()]))
                .collect()
        }
        _ => return Err(Failure::Usage("give either --parallel or both --src and --hyp".into())),
    };
    let records: Vec<Result<AnnotationRecord, Failure>> = pool(&a.settings, cfg)?.install(|| {
        jobs.par_iter()
            .map(|(no, src, refs)| {
                let r = if a.presegmented {
                    ann.annotate_presegmented(src, refs, dialect)
                } else {
                    ann.annotate(src, refs, dialect)
                };
                r.map_err(|e| Failure::Data(format!("line {no}: {e}")))
            })
            .collect()
    });
    let records = records.into_iter().collect::<Result<Vec<_>, _>>()?;
    write_output(a.out.as_deref(), &write_m2(&records, dialect)?)
}

fn cmd_score(a: ScoreArgs, cfg: &Config) -> CmdResult {
    let beta = a.beta.or(cfg.beta).unwrap_or(0.5);
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Failure::Usage(format!("beta must be positive, got {beta}")));
    }
    let ann = annotator(&Settings { granularity: a.granularity, alpha1: None, alpha2: None, lexicon: None, threads: None }, cfg)?;
    let report = score_corpus(&read_input(&a.hyp)?, &read_input(&a.gold)?, beta, a.granularity, &ann)?;
    write_output(None, &if a.table { report.to_table() } else { report.to_lines() })
}

fn warn(items: &[Item]) {
    for it in items {
        for w in &it.warnings {
            eprintln!("warning\t{}\t{w}", it.pair.id);
        }
    }
}

fn cmd_convert(a: ConvertArgs, cfg: &Config) -> CmdResult {
    let ann = annotator(&a.settings, cfg)?;
    let items = ingest::parse(&read_input(&a.input)?, a.format, &ann)?;
    warn(&items);
    let text = match a.emit {
        Emit::Parallel => ingest::write_parallel(items.iter().map(|i| &i.pair))?,
        Emit::M2 => {
            let dialect = a.dialect.or(cfg.dialect).unwrap_or(Dialect::Refined);
            let records: Vec<zhgec::Result<AnnotationRecord>> = pool(&a.settings, cfg)?
                .install(|| items.par_iter().map(|i| i.to_record(&ann, dialect)).collect());
            let mut out = Vec::with_capacity(records.len());
            for (r, it) in records.into_iter().zip(&items) {
                out.push(r.map_err(|e| Failure::Data(format!("record {}: {e}", it.pair.id)))?);
            }
            write_m2(&out, dialect)?
        }
    };
    write_output(a.out.as_deref(), &text)
}

fn cmd_diff(a: DiffArgs) -> CmdResult {
    let x = parse_m2(&read_input(&a.a)?)?;
    let y = parse_m2(&read_input(&a.b)?)?;
    write_output(None, &diff_records(&x, &y)?.render())
}

fn cmd_stats(a: StatsArgs) -> CmdResult {
    let text = read_input(&a.input)?;
    let kind = match a.format.as_deref() {
        Some(f) => f.to_string(),
        None if text.trim_start().starts_with("S ") => "m2".to_string(),
        None => "parallel".to_string(),
    };
    let stats = if kind == "m2" {
        CorpusStats::from_records(&parse_m2(&text)?)
    } else {
        let format: CorpusFormat = kind.parse().map_err(|e: zhgec::Error| Failure::Usage(e.to_string()))?;
        let items = ingest::parse(&text, format, &Annotator::bundled())?;
        warn(&items);
        let pairs: Vec<_> = items.into_iter().map(|i| i.pair).collect();
        CorpusStats::from_pairs(&pairs)
    };
    write_output(None, &stats.render())
}

fn cged_spans(text: &str, format: Option<CorpusFormat>) -> Result<std::collections::BTreeMap<String, Vec<TypedSpan>>, Failure> {
    match format {
        None => Ok(parse_cged_result(text)?),
        Some(f @ (CorpusFormat::Cged2015 | CorpusFormat::Cged2016Plus | CorpusFormat::Cged2020)) => {
            let items = parse_cged(text, f, &Annotator::bundled())?;
            Ok(items.into_iter().map(|i| (i.pair.id.clone(), i.spans.iter().map(|s| s.typed()).collect())).collect())
        }
        Some(f) => Err(Failure::Usage(format!("{f} has no located CGED errors"))),
    }
}

fn cmd_cged_score(a: CgedArgs) -> CmdResult {
    let system = cged_spans(&read_input(&a.system)?, None)?;
    let gold = cged_spans(&read_input(&a.gold)?, a.gold_format)?;
    let lv = detection_levels(&system, &gold);
    let mut out = String::from("level\tprecision\trecall\tf1\n");
    let row = |out: &mut String, name: &str, c: Counts| {
        let _ = writeln!(out, "{name}\t{:.4}\t{:.4}\t{:.4}", c.precision(), c.recall(), c.f_beta(1.0));
    };
    row(&mut out, "detection", lv.detection);
    row(&mut out, "identification", lv.identification);
    row(&mut out, "position", lv.position);
    write_output(None, &out)
}
