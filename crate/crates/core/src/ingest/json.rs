//! Corpora distributed as JSON objects.

use serde_json::Value;

use super::{char_index_map, with_meta, Item};
use crate::error::{Error, Result};
use crate::model::{apply_edits, Edit, EditLabel, ErrorLabel, SentencePair};
use crate::segment::segment_chars;

/// Splits a file into `(id, record)` pairs. Accepts a JSON array, an object
/// keyed by id, a single record, or one JSON value per line.
pub(crate) fn records(text: &str) -> Result<Vec<(String, Value)>> {
    let trimmed = text.trim_start_matches('\u{feff}').trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    match serde_json::from_str::<Value>(trimmed) {
        Ok(v) => Ok(split_top(v)),
        Err(whole) => {
            let mut out = Vec::new();
            for (i, line) in trimmed.lines().enumerate() {
                let line = line.trim().trim_end_matches(',');
                if line.is_empty() {
                    continue;
                }
                let v: Value = serde_json::from_str(line)
                    .map_err(|e| Error::data(format!("line {}", i + 1), format!("{e} (whole-file parse: {whole})")))?;
                for (id, r) in split_top(v) {
                    let id = if id.starts_with('#') { format!("#{}", out.len() + 1) } else { id };
                    out.push((id, r));
                }
            }
            Ok(out)
        }
    }
}

fn looks_like_record(m: &serde_json::Map<String, Value>) -> bool {
    ["sentence", "source", "sent", "sentence_text", "sentences"].iter().any(|k| m.contains_key(*k))
}

fn split_top(v: Value) -> Vec<(String, Value)> {
    match v {
        Value::Array(a) => a.into_iter().enumerate().map(|(i, r)| (format!("#{}", i + 1), r)).collect(),
        Value::Object(m) if looks_like_record(&m) => vec![("#1".to_string(), Value::Object(m))],
        Value::Object(m) => m.into_iter().collect(),
        other => vec![("#1".to_string(), other)],
    }
}

fn str_field<'a>(v: &'a Value, key: &str, id: &str) -> Result<&'a str> {
    v.get(key).and_then(Value::as_str).ok_or_else(|| Error::data(id, format!("missing string field {key:?}")))
}

fn int_field(v: &Value, key: &str) -> Option<i64> {
    match v.get(key)? {
        Value::Number(n) => n.as_i64(),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

/// The record's own id field when present, else the container key.
fn record_id(v: &Value, key: &str, fields: &[&str]) -> String {
    for f in fields {
        match v.get(*f) {
            Some(Value::String(s)) => return s.clone(),
            Some(Value::Number(n)) => return n.to_string(),
            _ => {}
        }
    }
    key.to_string()
}

/// Converts raw code-point positions of `text` to character token indices.
fn token_at(map: &[Option<usize>], pos: usize, id: &str) -> Result<usize> {
    match map.get(pos) {
        Some(Some(k)) => Ok(*k),
        Some(None) => Err(Error::data(id, format!("position {pos} falls on whitespace"))),
        None => Err(Error::data(id, format!("position {pos} beyond a sentence of {} characters", map.len()))),
    }
}

/// Token index of the gap before raw position `pos` (which may equal the
/// sentence length).
fn gap_at(map: &[Option<usize>], pos: usize, id: &str) -> Result<usize> {
    if pos == map.len() {
        return Ok(map.iter().flatten().count());
    }
    token_at(map, pos, id)
}

fn check_reconstruction(source: &str, edits: &[Edit], id: &str) -> Result<String> {
    let seg = segment_chars(source)?;
    apply_edits(&seg, edits).map_err(|e| Error::data(id, e.to_string()))
}

/// FCGEC: `operation` is a JSON list with one object per reference, whose
/// keys are Delete, Insert, Modify and Switch. All positions refer to the
/// untouched source.
pub fn parse_fcgec(key: &str, v: &Value) -> Result<Item> {
    let id = key.to_string();
    let sentence = str_field(v, "sentence", &id)?;
    let flag = int_field(v, "error_flag").unwrap_or(1);
    let mut pair = SentencePair::new(&id, sentence, Vec::new(), "fcgec")?;
    if let Some(t) = v.get("error_type").and_then(Value::as_str) {
        pair.meta.insert("error_type".into(), t.to_string());
    }
    if flag == 0 {
        pair.references.push(sentence.to_string());
        return Ok(Item { pair, gold: Some(vec![Vec::new()]), spans: Vec::new(), warnings: Vec::new() });
    }
    let ops: Value = match v.get("operation") {
        Some(Value::String(s)) => serde_json::from_str(s).map_err(|e| Error::data(&id, format!("operation: {e}")))?,
        Some(other) => other.clone(),
        None => Value::Array(Vec::new()),
    };
    let ops = match ops {
        Value::Array(a) => a,
        Value::Object(_) => vec![ops],
        _ => return Err(Error::data(&id, "operation must be a list of objects")),
    };
    let map = char_index_map(sentence);
    let mut gold = Vec::new();
    for op in &ops {
        let mut edits = fcgec_edits(op, &map, sentence, &id)?;
        edits.sort_by_key(|e| (e.start, e.end));
        let target = check_reconstruction(sentence, &edits, &id)?;
        pair.references.push(target);
        gold.push(edits);
    }
    Ok(Item { pair, gold: Some(gold), spans: Vec::new(), warnings: Vec::new() })
}

fn positions(v: &Value, id: &str) -> Result<Vec<usize>> {
    v.as_array()
        .ok_or_else(|| Error::data(id, "expected a list of positions"))?
        .iter()
        .map(|p| p.as_u64().map(|x| x as usize).ok_or_else(|| Error::data(id, format!("bad position {p}"))))
        .collect()
}

fn tag_len(tag: Option<&str>) -> Option<usize> {
    tag?.rsplit_once('_')?.1.parse().ok()
}

fn fcgec_edits(op: &Value, map: &[Option<usize>], sentence: &str, id: &str) -> Result<Vec<Edit>> {
    let chars: Vec<char> = sentence.chars().collect();
    let mut edits = Vec::new();
    if let Some(d) = op.get("Delete") {
        let mut ps: Vec<usize> = positions(d, id)?.into_iter().map(|p| token_at(map, p, id)).collect::<Result<_>>()?;
        ps.sort_unstable();
        ps.dedup();
        let mut k = 0;
        while k < ps.len() {
            let start = ps[k];
            while k + 1 < ps.len() && ps[k + 1] == ps[k] + 1 {
                k += 1;
            }
            edits.push(Edit::new(start, ps[k] + 1, "")?);
            k += 1;
        }
    }
    for (name, insert) in [("Insert", true), ("Modify", false)] {
        let Some(list) = op.get(name) else { continue };
        let list = list.as_array().ok_or_else(|| Error::data(id, format!("{name} must be a list")))?;
        for entry in list {
            let pos = entry.get("pos").and_then(Value::as_u64).ok_or_else(|| Error::data(id, format!("{name} without pos")))? as usize;
            let label = entry.get("label").and_then(Value::as_str).unwrap_or_default();
            let tag = entry.get("tag").and_then(Value::as_str);
            if insert {
                let at = token_at(map, pos, id)? + 1;
                edits.push(Edit::new(at, at, label)?);
            } else {
                let n = tag_len(tag).unwrap_or_else(|| label.chars().count()).max(1);
                let start = token_at(map, pos, id)?;
                let end = gap_at(map, pos + n, id)?;
                edits.push(Edit::new(start, end, label)?);
            }
        }
    }
    if let Some(sw) = op.get("Switch") {
        let perm = positions(sw, id)?;
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        if sorted != (0..chars.len()).collect::<Vec<_>>() {
            return Err(Error::data(id, "Switch must list every source position exactly once"));
        }
        let moved: Vec<usize> = (0..perm.len()).filter(|&i| perm[i] != i).collect();
        if let (Some(&lo), Some(&hi)) = (moved.first(), moved.last()) {
            let text: String = perm[lo..=hi].iter().map(|&p| chars[p]).filter(|c| !c.is_whitespace()).collect();
            let e = Edit::new(token_at(map, lo, id)?, gap_at(map, hi + 1, id)?, text)?
                .with_label(EditLabel::Typed(ErrorLabel::word_order()))?;
            edits.push(e);
        }
    }
    Ok(edits)
}

/// FlaCGEC: `annotation` holds `s e|||TYPE|||replacement` entries joined by
/// `;`, with `e` the last character of the span. Types stay opaque.
pub fn parse_flacgec(key: &str, v: &Value) -> Result<Item> {
    let id = key.to_string();
    let source = str_field(v, "source", &id)?;
    let target = v.get("target").and_then(Value::as_str);
    let mut pair = SentencePair::new(&id, source, target.map(|t| vec![t.to_string()]).unwrap_or_default(), "flacgec")?;
    let map = char_index_map(source);
    let chars: Vec<char> = source.chars().collect();
    let mut edits = Vec::new();
    let mut warnings = Vec::new();
    let annotation = v.get("annotation").and_then(Value::as_str).unwrap_or_default();
    let mut spans_text = Vec::new();
    for part in annotation.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let f: Vec<&str> = part.split("|||").collect();
        if f.len() < 3 {
            return Err(Error::data(&id, format!("annotation entry {part:?} needs 3 fields")));
        }
        let mut nums = f[0].split_whitespace().map(str::parse::<usize>);
        let (s, e) = match (nums.next(), nums.next()) {
            (Some(Ok(s)), Some(Ok(e))) if s <= e => (s, e),
            _ => return Err(Error::data(&id, format!("bad span {:?}", f[0]))),
        };
        if e >= chars.len() {
            return Err(Error::data(&id, format!("span {s} {e} beyond a sentence of {} characters", chars.len())));
        }
        spans_text.push((s, e, chars[s..=e].iter().collect::<String>()));
        let label = EditLabel::Opaque(f[1].to_string());
        edits.push(Edit::new(token_at(&map, s, &id)?, gap_at(&map, e + 1, &id)?, f[2])?.with_label(label)?);
    }
    let ops = v.get("operation").and_then(Value::as_str).map(operation_spans).unwrap_or_default();
    if !ops.is_empty() || !spans_text.is_empty() {
        for (s, e, t) in &spans_text {
            if !ops.iter().any(|(a, b, x)| a == s && b == e && x == t) {
                warnings.push(format!("annotation span {s} {e} ({t}) has no matching operation"));
            }
        }
        for (a, b, x) in &ops {
            if !spans_text.iter().any(|(s, e, t)| a == s && b == e && x == t) {
                warnings.push(format!("operation ({a}, {b}, {x}) has no matching annotation"));
            }
        }
    }
    edits.sort_by_key(|e| (e.start, e.end));
    let rebuilt = check_reconstruction(source, &edits, &id)?;
    if let Some(t) = target {
        if rebuilt != t {
            warnings.push(format!("annotation yields {rebuilt:?}, target is {t:?}"));
        }
    }
    pair = with_meta(pair, [("offset_end".to_string(), "inclusive".to_string())]);
    Ok(Item { pair, gold: Some(vec![edits]), spans: Vec::new(), warnings })
}

/// Pulls `(start, end, 'text')` triples out of FlaCGEC's Python-literal
/// operation field.
fn operation_spans(s: &str) -> Vec<(usize, usize, String)> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let number = |i: &mut usize| -> Option<usize> {
        let st = *i;
        while *i < cs.len() && cs[*i].is_ascii_digit() {
            *i += 1;
        }
        cs[st..*i].iter().collect::<String>().parse().ok()
    };
    let skip = |i: &mut usize, what: &[char]| {
        while *i < cs.len() && what.contains(&cs[*i]) {
            *i += 1;
        }
    };
    while i < cs.len() {
        if cs[i] != '(' {
            i += 1;
            continue;
        }
        let mut j = i + 1;
        let parsed = (|| {
            let a = number(&mut j)?;
            skip(&mut j, &[',', ' ']);
            let b = number(&mut j)?;
            skip(&mut j, &[',', ' ']);
            let q = *cs.get(j)?;
            if q != '\'' && q != '"' {
                return None;
            }
            let close = cs[j + 1..].iter().position(|&c| c == q)? + j + 1;
            let text: String = cs[j + 1..close].iter().collect();
            j = close + 1;
            Some((a, b, text))
        })();
        if let Some(t) = parsed {
            out.push(t);
            i = j;
        } else {
            i += 1;
        }
    }
    out
}

/// YACLC: grammatical corrections become references; fluency corrections
/// and annotator counts go to metadata.
pub fn parse_yaclc(key: &str, v: &Value) -> Result<Item> {
    let id = record_id(v, key, &["sentence_id"]);
    let source = str_field(v, "sentence_text", &id)?;
    let mut pair = SentencePair::new(&id, source, Vec::new(), "yaclc")?;
    let mut counts = Vec::new();
    let mut fluency = Vec::new();
    for a in v.get("sentence_annos").and_then(Value::as_array).into_iter().flatten() {
        let Some(c) = a.get("correction").and_then(Value::as_str) else { continue };
        let n = int_field(a, "annotator_count").unwrap_or(1);
        if int_field(a, "is_grammatical").unwrap_or(1) == 1 {
            pair.references.push(c.to_string());
            counts.push(n.to_string());
        } else {
            fluency.push(c.to_string());
        }
    }
    pair.meta.insert("annotator_counts".into(), counts.join(","));
    for (i, f) in fluency.iter().enumerate() {
        pair.meta.insert(format!("fluency.{i}"), f.clone());
    }
    if let Some(n) = int_field(v, "total_annotators") {
        pair.meta.insert("total_annotators".into(), n.to_string());
    }
    if let Some(n) = int_field(v, "article_id") {
        pair.meta.insert("article_id".into(), n.to_string());
    }
    Ok(Item::plain(pair))
}

/// CCTC: one record per document; `sentences` and `corrections` are nested
/// the same way. Each correction is `[pos, op, old, new]` with a 1-based
/// position.
pub fn parse_cctc(key: &str, v: &Value) -> Result<Vec<Item>> {
    let doc = record_id(v, key, &["doc_id"]);
    let sentences = v.get("sentences").ok_or_else(|| Error::data(&doc, "missing sentences"))?;
    let empty = Value::Array(Vec::new());
    let corrections = v.get("corrections").unwrap_or(&empty);
    let mut flat = Vec::new();
    flatten(sentences, corrections, &mut Vec::new(), &mut flat);
    let mut items = Vec::new();
    for (path, sentence, corr) in flat {
        let id = format!("{doc}-{}", path.iter().map(usize::to_string).collect::<Vec<_>>().join("-"));
        let mut pair = SentencePair::new(&id, sentence, Vec::new(), "cctc")?;
        pair.meta.insert("doc_id".into(), doc.clone());
        pair.meta.insert("sentence_index".into(), path.iter().map(usize::to_string).collect::<Vec<_>>().join("."));
        let map = char_index_map(sentence);
        let chars: Vec<char> = sentence.chars().collect();
        let mut edits = Vec::new();
        for c in corr.as_array().into_iter().flatten() {
            let f = c.as_array().filter(|f| f.len() >= 4).ok_or_else(|| Error::data(&id, format!("bad correction {c}")))?;
            let pos = f[0].as_u64().ok_or_else(|| Error::data(&id, format!("bad position {}", f[0])))? as usize;
            let op = f[1].as_str().unwrap_or_default();
            let old = f[2].as_str().unwrap_or_default();
            let new = f[3].as_str().unwrap_or_default();
            if pos == 0 {
                return Err(Error::data(&id, "positions are 1-based"));
            }
            let start = pos - 1;
            let n = old.chars().count();
            let actual: String = chars.get(start..start + n).map(|s| s.iter().collect()).unwrap_or_default();
            if actual != old {
                return Err(Error::data(&id, format!("expected {old:?} at {pos}, found {actual:?}")));
            }
            let e = Edit::new(gap_at(&map, start, &id)?, gap_at(&map, start + n, &id)?, new)?;
            let e = if op == "W" { e.clone().with_label(EditLabel::Typed(ErrorLabel::word_order())).unwrap_or(e) } else { e };
            edits.push(e);
        }
        edits.sort_by_key(|e| (e.start, e.end));
        let target = check_reconstruction(sentence, &edits, &id)?;
        pair.references.push(target);
        items.push(Item { pair, gold: Some(vec![edits]), spans: Vec::new(), warnings: Vec::new() });
    }
    Ok(items)
}

fn flatten<'a>(s: &'a Value, c: &'a Value, path: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, &'a str, &'a Value)>) {
    static NONE: Value = Value::Null;
    match s {
        Value::String(text) => out.push((path.clone(), text, c)),
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                path.push(i);
                let sub = c.as_array().and_then(|a| a.get(i)).unwrap_or(&NONE);
                flatten(item, sub, path, out);
                path.pop();
            }
        }
        _ => {}
    }
}

/// NaCGEC: `target` is a list (or a single string); error type 正确 means
/// the target repeats the source.
pub fn parse_nacgec(key: &str, v: &Value) -> Result<Item> {
    let id = record_id(v, key, &["id", "sent_id"]);
    let source = str_field(v, "source", &id)?;
    let refs: Vec<String> = match v.get("target") {
        Some(Value::String(s)) => vec![s.clone()],
        Some(Value::Array(a)) => a.iter().filter_map(Value::as_str).map(String::from).collect(),
        _ => Vec::new(),
    };
    let mut pair = SentencePair::new(&id, source, refs, "nacgec")?;
    if let Some(t) = v.get("error_type").and_then(Value::as_str) {
        if t == "正确" && pair.references.is_empty() {
            pair.references.push(source.to_string());
        }
        pair.meta.insert("error_type".into(), t.to_string());
    }
    Ok(Item::plain(pair))
}

/// CEFE track 3: `sent` and `revisedSent`.
pub fn parse_cefe(key: &str, v: &Value) -> Result<Item> {
    let id = record_id(v, key, &["sent_id"]);
    let source = str_field(v, "sent", &id)?;
    let revised = str_field(v, "revisedSent", &id)?;
    Ok(Item::plain(SentencePair::new(&id, source, vec![revised.to_string()], "cefe")?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn container_shapes() {
        assert_eq!(records("[{\"sent\":\"a\"},{\"sent\":\"b\"}]").unwrap().len(), 2);
        assert_eq!(records("{\"x\":{\"sent\":\"a\"}}").unwrap()[0].0, "x");
        assert_eq!(records("{\"sent\":\"a\"}\n{\"sent\":\"b\"}\n").unwrap().len(), 2);
        assert!(records("").unwrap().is_empty());
        assert!(records("{oops").is_err());
    }

    #[test]
    fn cefe_requires_revision() {
        assert!(parse_cefe("1", &json!({"sent_id": "1", "sent": "我好"})).is_err());
        let it = parse_cefe("1", &json!({"sent": "我好", "revisedSent": "我好"})).unwrap();
        assert_eq!(it.pair.references, ["我好"]);
    }

    #[test]
    fn nacgec_correct_mirrors_source() {
        let it = parse_nacgec("1", &json!({"source": "好。", "error_type": "正确"})).unwrap();
        assert_eq!(it.pair.references, ["好。"]);
        let two = parse_nacgec("2", &json!({"source": "甲", "target": ["乙", "丙"], "error_type": "搭配不当"})).unwrap();
        assert_eq!(two.pair.references.len(), 2);
    }

    #[test]
    fn fcgec_switch_and_modify() {
        let v = json!({"sentence": "甲乙丙丁", "error_flag": 1, "operation": "[{\"Switch\":[0,2,1,3]}]"});
        let it = parse_fcgec("k", &v).unwrap();
        let gold = &it.gold.unwrap()[0];
        assert_eq!(gold.len(), 1);
        assert_eq!(gold[0].label.to_string(), "WO");
        assert_eq!(it.pair.references, ["甲丙乙丁"]);

        let m = json!({"sentence": "甲乙丙丁", "operation": [{"Modify": [{"pos": 1, "tag": "MOD_2", "label": "戊"}]}]});
        assert_eq!(parse_fcgec("k", &m).unwrap().pair.references, ["甲戊丁"]);

        let bad = json!({"sentence": "甲乙", "operation": "[{\"Delete\":[5]}]"});
        assert!(parse_fcgec("k", &bad).is_err());
    }

    #[test]
    fn fcgec_error_free() {
        let it = parse_fcgec("k", &json!({"sentence": "甲乙", "error_flag": 0, "operation": "[]"})).unwrap();
        assert_eq!(it.pair.references, ["甲乙"]);
        assert!(it.gold.unwrap()[0].is_empty());
    }

    #[test]
    fn flacgec_mismatch_is_a_warning() {
        let v = json!({"source": "甲乙丙", "target": "甲丁丙", "operation": "[[(1, 1, '乙'), 'x', 'S', ('null', 'null', '丁')]]",
                       "annotation": "0 0|||S-x|||丁"});
        let it = parse_flacgec("1", &v).unwrap();
        assert!(!it.warnings.is_empty());
        let empty = parse_flacgec("2", &json!({"source": "甲", "target": "甲", "annotation": ""})).unwrap();
        assert!(empty.gold.unwrap()[0].is_empty());
    }

    #[test]
    fn operation_literal_triples() {
        let s = "[[(7, 8, '再三'), '频率、重复副词', 'S', ('null', 'null', '再')]]";
        assert_eq!(operation_spans(s), [(7, 8, "再三".to_string())]);
    }

    #[test]
    fn cctc_old_text_is_checked() {
        let v = json!({"doc_id": "9", "sentences": [["甲的乙"]], "corrections": [[[[2, "R", "乙", ""]]]]});
        assert!(parse_cctc("9", &v).is_err());
        let ok = json!({"doc_id": "9", "sentences": [["甲的乙"]], "corrections": [[[[2, "R", "的", ""]]]]});
        assert_eq!(parse_cctc("9", &ok).unwrap()[0].pair.references, ["甲乙"]);
    }
}
