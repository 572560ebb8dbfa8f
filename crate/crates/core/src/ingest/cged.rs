//! CGED shared-task XML, 2014 through 2020-21.

use roxmltree::{Document, Node};

use super::{CgedSpan, CorpusFormat, Item};
use crate::annotate::Annotator;
use crate::error::{Error, Result};
use crate::model::SentencePair;

const TYPES_2014: [&str; 4] = ["Selection", "Missing", "Disorder", "Redundant"];
const TYPES_2015: [&str; 5] = ["Missing", "Permutation", "Addition", "Deletion", "Substitution"];
const TYPES_2016: [&str; 4] = ["R", "M", "S", "W"];

fn is_insertion(kind: &str) -> bool {
    matches!(kind, "M" | "Missing" | "Deletion")
}

fn strip_declaration(text: &str) -> &str {
    let t = text.trim_start_matches('\u{feff}').trim_start();
    if t.starts_with("<?xml") {
        t.find("?>").map(|i| &t[i + 2..]).unwrap_or(t)
    } else {
        t
    }
}

fn child<'a, 'i>(n: Node<'a, 'i>, tag: &str) -> Option<Node<'a, 'i>> {
    n.children().find(|c| c.has_tag_name(tag))
}

fn text_of(n: Option<Node>) -> String {
    n.map(|n| n.descendants().filter(|d| d.is_text()).filter_map(|d| d.text()).collect::<String>())
        .unwrap_or_default()
        .trim()
        .to_string()
}

fn offset(n: Node, attr: &str, id: &str) -> Result<usize> {
    let v = n.attribute(attr).ok_or_else(|| Error::data(id, format!("missing {attr}")))?;
    v.trim().parse().map_err(|_| Error::data(id, format!("{attr}={v:?} is not an integer")))
}

fn check_type(kind: &str, allowed: &[&str], id: &str) -> Result<()> {
    if allowed.contains(&kind) {
        Ok(())
    } else {
        Err(Error::data(id, format!("unknown error type {kind:?}")))
    }
}

/// Parses a CGED file. Offsets are 1-based and inclusive over the
/// non-whitespace characters of the sentence; a missing-word error at `s`
/// marks the gap before character `s`.
pub fn parse_cged(text: &str, variant: CorpusFormat, annotator: &Annotator) -> Result<Vec<Item>> {
    let wrapped = format!("<CGED-ROOT>{}</CGED-ROOT>", strip_declaration(text));
    let doc = Document::parse(&wrapped).map_err(|e| Error::data("xml", e.to_string()))?;
    let root = doc.root_element();
    match variant {
        CorpusFormat::Cged2014 => parse_2014(root),
        CorpusFormat::Cged2015 => parse_2015(root, annotator),
        CorpusFormat::Cged2016Plus | CorpusFormat::Cged2020 => parse_2016(root, variant, annotator),
        other => Err(Error::data("xml", format!("{other} is not a CGED variant"))),
    }
}

fn parse_2014(root: Node) -> Result<Vec<Item>> {
    let mut items = Vec::new();
    for essay in root.descendants().filter(|n| n.has_tag_name("ESSAY") || n.has_tag_name("DOC")) {
        let title = essay.attribute("title");
        let sentences = essay.descendants().filter(|n| n.has_tag_name("SENTENCE"));
        for s in sentences {
            let id = s.attribute("id").unwrap_or_default().to_string();
            let mut pair = SentencePair::new(&id, text_of(Some(s)), Vec::new(), "cged2014")?;
            let mut types = Vec::new();
            for m in essay.children().filter(|m| m.has_tag_name("MISTAKE") && m.attribute("id") == Some(id.as_str())) {
                let kind = text_of(child(m, "TYPE"));
                check_type(&kind, &TYPES_2014, &id)?;
                types.push(kind);
                let correction = text_of(child(m, "CORRECTION"));
                if !correction.is_empty() && !pair.references.contains(&correction) {
                    pair.references.push(correction);
                }
            }
            if !types.is_empty() {
                pair.meta.insert("types".into(), types.join(","));
            }
            if let Some(level) = id.split('-').next().filter(|l| !l.is_empty()) {
                pair.meta.insert("level".into(), level.to_string());
            }
            if let Some(t) = title {
                pair.meta.insert("title".into(), t.to_string());
            }
            items.push(Item::plain(pair));
        }
    }
    Ok(items)
}

/// Converts a CGED span to 0-based end-exclusive character offsets.
fn to_zero_based(start: usize, end: usize, kind: &str, len: usize, id: &str) -> Result<(usize, usize)> {
    if start == 0 || end < start || end > len {
        return Err(Error::data(id, format!("offsets {start}-{end} outside a sentence of {len} characters")));
    }
    if is_insertion(kind) && start == end {
        Ok((start - 1, start - 1))
    } else {
        Ok((start - 1, end))
    }
}

fn located_item(
    mut pair: SentencePair,
    spans: Vec<CgedSpan>,
    correction: Option<String>,
    annotator: &Annotator,
) -> Result<Item> {
    let len = pair.source.chars().filter(|c| !c.is_whitespace()).count();
    let mut zero = Vec::with_capacity(spans.len());
    for s in &spans {
        zero.push(to_zero_based(s.start, s.end, &s.kind, len, &pair.id)?);
    }
    let mut item = Item { pair: pair.clone(), gold: None, spans, warnings: Vec::new() };
    if let Some(c) = correction.filter(|c| !c.is_empty()) {
        let (_, edits) = annotator.project_spans(&pair.source, &c, &zero).map_err(|e| Error::data(&pair.id, e.to_string()))?;
        pair.references.push(c);
        item.pair = pair;
        item.gold = Some(vec![edits]);
    }
    Ok(item)
}

fn parse_2015(root: Node, annotator: &Annotator) -> Result<Vec<Item>> {
    let mut items = Vec::new();
    for docn in root.descendants().filter(|n| n.has_tag_name("DOC")) {
        for s in docn.children().filter(|n| n.has_tag_name("SENTENCE")) {
            let id = s.attribute("id").unwrap_or_default().to_string();
            let mut pair = SentencePair::new(&id, text_of(Some(s)), Vec::new(), "cged2015")?;
            let mut spans = Vec::new();
            let mut correction = None;
            for m in docn.children().filter(|m| m.has_tag_name("MISTAKE")) {
                if m.attribute("id").map(|x| x != id).unwrap_or(false) {
                    continue;
                }
                let kind = text_of(child(m, "TYPE"));
                check_type(&kind, &TYPES_2015, &id)?;
                spans.push(CgedSpan {
                    start: offset(m, "start_off", &id)?,
                    end: offset(m, "end_off", &id)?,
                    kind,
                    answers: Vec::new(),
                });
                let c = text_of(child(m, "CORRECTION"));
                if !c.is_empty() {
                    correction.get_or_insert(c);
                }
            }
            if let Some(level) = id.split('-').next().filter(|l| !l.is_empty()) {
                pair.meta.insert("level".into(), level.to_string());
            }
            pair.meta.insert("offset_base".into(), "1".into());
            items.push(located_item(pair, spans, correction, annotator)?);
        }
    }
    Ok(items)
}

fn parse_2016(root: Node, variant: CorpusFormat, annotator: &Annotator) -> Result<Vec<Item>> {
    let mut items = Vec::new();
    for docn in root.descendants().filter(|n| n.has_tag_name("DOC")) {
        let t = child(docn, "TEXT").ok_or_else(|| Error::data("DOC", "missing TEXT"))?;
        let id = t.attribute("id").unwrap_or_default().to_string();
        let mut pair = SentencePair::new(&id, text_of(Some(t)), Vec::new(), variant.as_str())?;
        let mut spans = Vec::new();
        for e in docn.children().filter(|n| n.has_tag_name("ERROR")) {
            let kind = e.attribute("type").unwrap_or_default().to_string();
            check_type(&kind, &TYPES_2016, &id)?;
            let answers = e
                .attribute("answer")
                .map(|a| a.split([',', '，']).map(str::trim).filter(|x| !x.is_empty()).map(String::from).collect())
                .unwrap_or_default();
            spans.push(CgedSpan { start: offset(e, "start_off", &id)?, end: offset(e, "end_off", &id)?, kind, answers });
        }
        pair.meta.insert("offset_base".into(), "1".into());
        let correction = child(docn, "CORRECTION").map(|c| text_of(Some(c)));
        items.push(located_item(pair, spans, correction, annotator)?);
    }
    Ok(items)
}
