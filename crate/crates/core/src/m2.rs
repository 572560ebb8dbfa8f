//! Reading and writing m2 files in the ChERRANT and refined dialects.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{
    AnnotationRecord, Dialect, Edit, EditLabel, ErrorLabel, Granularity, Op, Segmentation, Subtype,
};

const NOOP: &str = "noop";

/// Renders a typed label in the given dialect.
pub fn render_label(label: &ErrorLabel, dialect: Dialect) -> String {
    match dialect {
        Dialect::Refined => label.to_string(),
        Dialect::Cherrant => {
            let op = match label.op() {
                Op::R => "S",
                Op::M => "M",
                Op::U => "R",
                Op::WO => "W",
            };
            match label.subtype() {
                Some(s) => format!("{op}:{}", s.as_str()),
                None => op.to_string(),
            }
        }
    }
}

/// Parses a TYPE field. Anything outside the dialect's vocabulary is kept as
/// an opaque label.
pub fn parse_label(text: &str, dialect: Dialect) -> EditLabel {
    let (op, sub) = match text.split_once(':') {
        Some((o, s)) => (o, Some(s)),
        None => (text, None),
    };
    let op = match (dialect, op) {
        (Dialect::Refined, "R") | (Dialect::Cherrant, "S") => Op::R,
        (_, "M") => Op::M,
        (Dialect::Refined, "U") | (Dialect::Cherrant, "R") => Op::U,
        (Dialect::Refined, "WO") | (Dialect::Cherrant, "W") => Op::WO,
        _ => return EditLabel::Opaque(text.to_string()),
    };
    let sub = match sub.map(str::parse::<Subtype>) {
        None => None,
        Some(Ok(s)) => Some(s),
        Some(Err(_)) => return EditLabel::Opaque(text.to_string()),
    };
    match ErrorLabel::new(op, sub) {
        Ok(l) => EditLabel::Typed(l),
        Err(_) => EditLabel::Opaque(text.to_string()),
    }
}

fn label_text(label: &EditLabel, dialect: Dialect) -> Result<String> {
    match label {
        EditLabel::Typed(l) => Ok(render_label(l, dialect)),
        EditLabel::Opaque(s) => Ok(s.clone()),
        EditLabel::Unclassified => Err(Error::InvalidLabel("cannot write an unclassified edit".into())),
    }
}

/// Serializes records. Each record ends with a newline; records are
/// separated by one blank line.
pub fn write_m2(records: &[AnnotationRecord], dialect: Dialect) -> Result<String> {
    let mut blocks = Vec::with_capacity(records.len());
    for r in records {
        blocks.push(write_record(r, dialect)?);
    }
    Ok(blocks.join("\n"))
}

fn write_record(r: &AnnotationRecord, dialect: Dialect) -> Result<String> {
    let mut out = String::new();
    out.push_str("S ");
    out.push_str(&r.source.surfaces().collect::<Vec<_>>().join(" "));
    out.push('\n');
    if dialect == Dialect::Cherrant {
        let mut annotators: Vec<usize> = r.edit_sets.keys().chain(r.targets.keys()).copied().collect();
        annotators.sort_unstable();
        annotators.dedup();
        if annotators.is_empty() {
            annotators.push(0);
        }
        for k in annotators {
            let line = match r.targets.get(&k) {
                Some(t) => t.clone(),
                None => r.target_tokens(k).join(" "),
            };
            out.push_str(&format!("T0-A{k} {line}\n"));
        }
    }
    let multi = r.edit_sets.len() > 1;
    for (&k, edits) in &r.edit_sets {
        if edits.is_empty() && multi && dialect == Dialect::Refined {
            out.push_str(&format!("A -1 -1|||{NOOP}|||-NONE-|||REQUIRED|||-NONE-|||{k}\n"));
        }
        for e in edits {
            let repl = if e.replacement.is_empty() && dialect == Dialect::Cherrant {
                "-NONE-"
            } else {
                e.replacement.as_str()
            };
            out.push_str(&format!(
                "A {} {}|||{}|||{}|||REQUIRED|||-NONE-|||{}\n",
                e.start,
                e.end,
                label_text(&e.label, dialect)?,
                repl,
                e.annotator
            ));
        }
    }
    Ok(out)
}

fn granularity_of(tokens: &[&str]) -> Granularity {
    if tokens.iter().all(|t| t.chars().count() == 1) {
        Granularity::Character
    } else {
        Granularity::Word
    }
}

struct Pending {
    source: Segmentation,
    edits: BTreeMap<usize, Vec<Edit>>,
    targets: BTreeMap<usize, String>,
}

impl Pending {
    /// A record without edit lines still has annotator 0's (empty) set.
    fn finish(mut self) -> AnnotationRecord {
        let dialect = if self.targets.is_empty() { Dialect::Refined } else { Dialect::Cherrant };
        if self.edits.is_empty() {
            self.edits.insert(0, Vec::new());
        }
        AnnotationRecord { source: self.source, edit_sets: self.edits, targets: self.targets, dialect }
    }
}

/// Parses m2 text. The dialect of each record follows from whether it has
/// `T` lines.
pub fn parse_m2(text: &str) -> Result<Vec<AnnotationRecord>> {
    let mut records = Vec::new();
    let mut cur: Option<Pending> = None;
    for (i, raw) in text.split('\n').enumerate() {
        let line_no = i + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            if let Some(p) = cur.take() {
                records.push(p.finish());
            }
            continue;
        }
        if let Some(rest) = line.strip_prefix("S ").or(if line == "S" { Some("") } else { None }) {
            if let Some(p) = cur.take() {
                records.push(p.finish());
            }
            let toks: Vec<&str> = rest.split(' ').filter(|t| !t.is_empty()).collect();
            let source = Segmentation::from_surfaces(&toks, granularity_of(&toks));
            cur = Some(Pending { source, edits: BTreeMap::new(), targets: BTreeMap::new() });
        } else if line.starts_with('T') {
            let p = cur.as_mut().ok_or_else(|| Error::parse(line_no, "T line before S line"))?;
            let (tag, rest) = line.split_once(' ').unwrap_or((line, ""));
            let k = tag
                .rsplit_once("-A")
                .and_then(|(_, k)| k.parse::<usize>().ok())
                .ok_or_else(|| Error::parse(line_no, format!("bad target tag {tag:?}")))?;
            p.targets.insert(k, rest.to_string());
            p.edits.entry(k).or_default();
        } else if let Some(rest) = line.strip_prefix("A ") {
            let p = cur.as_mut().ok_or_else(|| Error::parse(line_no, "A line before S line"))?;
            let dialect = if p.targets.is_empty() { Dialect::Refined } else { Dialect::Cherrant };
            let (k, edit) = parse_a_line(rest, dialect, line_no)?;
            let set = p.edits.entry(k).or_default();
            if let Some(e) = edit {
                set.push(e);
            }
        } else {
            return Err(Error::parse(line_no, format!("unrecognized line {line:?}")));
        }
    }
    if let Some(p) = cur.take() {
        records.push(p.finish());
    }
    Ok(records)
}

fn parse_a_line(rest: &str, dialect: Dialect, line_no: usize) -> Result<(usize, Option<Edit>)> {
    let fields: Vec<&str> = rest.split("|||").collect();
    if fields.len() != 6 {
        return Err(Error::parse(line_no, format!("expected 6 |||-separated fields, found {}", fields.len())));
    }
    let annotator: usize = fields[5]
        .trim()
        .parse()
        .map_err(|_| Error::parse(line_no, format!("bad annotator id {:?}", fields[5])))?;
    let mut offs = fields[0].split(' ');
    let (s, e) = match (offs.next(), offs.next(), offs.next()) {
        (Some(s), Some(e), None) => (s, e),
        _ => return Err(Error::parse(line_no, format!("bad span {:?}", fields[0]))),
    };
    if s == "-1" && e == "-1" && fields[1] == NOOP {
        return Ok((annotator, None));
    }
    let start: usize = s.parse().map_err(|_| Error::parse(line_no, format!("non-integer offset {s:?}")))?;
    let end: usize = e.parse().map_err(|_| Error::parse(line_no, format!("non-integer offset {e:?}")))?;
    let repl = if fields[2] == "-NONE-" { "" } else { fields[2] };
    let base = Edit::new(start, end, repl).map_err(|err| Error::parse(line_no, err.to_string()))?;
    // A typed label that contradicts the span shape is kept verbatim as opaque.
    let edit = match base.clone().with_label(parse_label(fields[1], dialect)) {
        Ok(e) => e,
        Err(_) => base.with_label(EditLabel::Opaque(fields[1].to_string()))?,
    }
    .with_annotator(annotator);
    Ok((annotator, Some(edit)))
}
