use super::Item;
use crate::error::{Error, Result};
use crate::model::SentencePair;

/// `id<TAB>k<TAB>source<TAB>correction…` with exactly `k` corrections after
/// trailing empty fields are dropped.
pub fn parse_nlpcc_train(line: &str) -> Result<Item> {
    let mut fields: Vec<&str> = line.split('\t').collect();
    while fields.len() > 3 && fields.last().map(|f| f.is_empty()).unwrap_or(false) {
        fields.pop();
    }
    if fields.len() < 3 {
        return Err(Error::data(fields[0], format!("expected at least 3 tab-separated fields, found {}", fields.len())));
    }
    let id = fields[0];
    let k: usize = fields[1]
        .trim()
        .parse()
        .map_err(|_| Error::data(id, format!("correction count {:?} is not an integer", fields[1])))?;
    let refs: Vec<String> = fields[3..].iter().map(|s| s.to_string()).collect();
    if refs.len() != k {
        return Err(Error::data(id, format!("declares {k} corrections but has {}", refs.len())));
    }
    let mut pair = SentencePair::new(id, fields[2], refs, "nlpcc2018")?;
    pair.meta.insert("corrections".into(), k.to_string());
    Ok(Item::plain(pair))
}

/// One line of the word-segmented test file, kept verbatim.
pub fn parse_nlpcc_seg(id: &str, line: &str) -> Result<Item> {
    let mut pair = SentencePair::new(id, line, Vec::new(), "nlpcc2018")?;
    pair.meta.insert("presegmented".into(), "true".into());
    Ok(Item::plain(pair))
}
