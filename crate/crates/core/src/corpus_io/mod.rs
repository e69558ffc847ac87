//! Readers and writers for the four on-disk formats: morphologically
//! analyzed corpus lines, bracketed constituency trees, CoNLL-U with
//! multiword-token ranges, and plain token streams.
//!
//! All formats are UTF-8 with LF line endings, tab-separated where columnar,
//! and blank-line sentence separation. Writers are canonical (a fixed
//! escaping and column layout); readers accept exactly the canonical form
//! plus harmless slack noted per reader. For canonical files, read then
//! write reproduces the bytes.

mod analysis;
mod conllu;
mod morph;
mod tokens;
mod tree;

use thiserror::Error;

pub use analysis::{format_analysis, parse_analysis};
pub use conllu::{
    read_conllu, read_conllu_with_level, upos_of_group, write_conllu, write_conllu_corpus,
};
pub use morph::{read_morph_corpus, read_morph_corpus_with, write_morph_corpus, SentenceBoundary};
pub use tokens::{read_tokens, write_tokens};
pub use tree::{read_treebank, write_bracketed, write_treebank};

/// A malformed input, positioned by 1-based line number.
#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

impl FormatError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        FormatError {
            line,
            message: message.into(),
        }
    }
}
