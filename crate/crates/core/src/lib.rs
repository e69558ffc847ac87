//! Korean morphological segmentation at five granularity levels.
//!
//! A sentence analyzed into eojeols (space-delimited units) and their
//! morpheme sequences can be tokenized at five increasingly fine levels:
//! eojeols as-is, then splitting off symbols, case markers, verbal endings,
//! and finally every morpheme. [`granularity`] implements the level logic on
//! the [`model`] types, [`corpus_io`] reads and writes the interchange
//! formats, [`metrics`] scores system output, and [`tagger`] trains a
//! baseline morphological analyzer that works at any of the five levels.

pub mod corpus_io;
pub mod gen;
pub mod granularity;
pub mod hangul;
pub mod metrics;
pub mod model;
pub mod tagger;
pub mod tags;

pub use model::{
    EojeolAnalysis, Level, Morpheme, SegmentedSentence, Sentence, SyntaxTree, TokenGroup,
};
pub use tags::{SejongTag, TagClass};
