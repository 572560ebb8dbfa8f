//! Edit extraction, classification, m2 serialization and MaxMatch scoring
//! for Chinese grammatical error correction.
//!
//! The pipeline for one sentence pair is
//! [`segment`] → [`align::align`] → [`align::merge_edits`] →
//! [`align::detect_word_order`] → [`classify::classify_edit`] → [`m2::write_m2`].
//! [`annotate::Annotator`] wires those steps together.

pub mod align;
pub mod annotate;
pub mod classify;
pub mod diff;
mod error;
pub mod ingest;
pub mod m2;
pub mod model;
pub mod phonosim;
pub mod resources;
pub mod score;
pub mod segment;
pub mod stats;

pub use error::{Error, Result};
pub use model::{
    apply_edits, AnnotationRecord, CostConfig, Dialect, Edit, EditLabel, ErrorLabel, Granularity,
    Op, SentencePair, Segmentation, Subtype, Thresholds, Token, Upos,
};
pub use resources::{Providers, Resources};
