use crate::model::Granularity;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid edit: {0}")]
    InvalidEdit(String),
    #[error("invalid label: {0}")]
    InvalidLabel(String),
    #[error("overlapping edits: {first} and {second}")]
    Overlap { first: String, second: String },
    #[error("granularity mismatch: {0} vs {1}")]
    GranularityMismatch(Granularity, Granularity),
    #[error("source mismatch at sentence {0}")]
    SourceMismatch(usize),
    #[error("record {record}: {msg}")]
    Data { record: String, msg: String },
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    pub(crate) fn data(record: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Data { record: record.into(), msg: msg.into() }
    }
}
