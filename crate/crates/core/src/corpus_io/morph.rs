//! The morphologically analyzed corpus format: one eojeol per line as
//! `record-id<TAB>surface<TAB>analysis`, sentences separated by blank lines
//! (or, in legacy exports, detected by a change of record-id prefix).

use super::analysis::{format_analysis, parse_analysis};
use super::FormatError;
use crate::model::{EojeolAnalysis, Sentence};

/// How sentence boundaries are marked in a morph corpus file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SentenceBoundary {
    /// A blank line ends the sentence (the written format).
    #[default]
    BlankLine,
    /// A new sentence starts when the record-id prefix (everything before
    /// the last `-`) changes; blank lines are ignored.
    IdPrefixChange,
}

fn id_prefix(id: &str) -> &str {
    match id.rfind('-') {
        Some(pos) => &id[..pos],
        None => id,
    }
}

/// Read a morph corpus with blank-line sentence boundaries.
pub fn read_morph_corpus(text: &str) -> Result<Vec<Sentence>, FormatError> {
    read_morph_corpus_with(text, SentenceBoundary::BlankLine)
}

pub fn read_morph_corpus_with(
    text: &str,
    boundary: SentenceBoundary,
) -> Result<Vec<Sentence>, FormatError> {
    let mut sentences = Vec::new();
    let mut current: Vec<EojeolAnalysis> = Vec::new();
    let mut current_id: Option<String> = None;

    let mut flush = |current: &mut Vec<EojeolAnalysis>, current_id: &mut Option<String>| {
        if !current.is_empty() {
            sentences.push(Sentence {
                id: current_id.take().unwrap_or_default(),
                eojeols: std::mem::take(current),
            });
        }
        *current_id = None;
    };

    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        if line.is_empty() {
            if boundary == SentenceBoundary::BlankLine {
                flush(&mut current, &mut current_id);
            }
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(FormatError::new(
                lineno,
                format!(
                    "expected 3 tab-separated fields (id, surface, analysis), got {}",
                    fields.len()
                ),
            ));
        }
        let (record_id, surface, analysis) = (fields[0], fields[1], fields[2]);
        if record_id.is_empty() {
            return Err(FormatError::new(lineno, "empty record id"));
        }
        if surface.is_empty() || surface.chars().any(char::is_whitespace) {
            return Err(FormatError::new(lineno, format!("bad surface {surface:?}")));
        }
        if boundary == SentenceBoundary::IdPrefixChange {
            let changed = current_id
                .as_deref()
                .is_some_and(|prev| id_prefix(prev) != id_prefix(record_id));
            if changed {
                flush(&mut current, &mut current_id);
            }
        }
        let morphemes = parse_analysis(analysis, lineno)?;
        if current_id.is_none() {
            current_id = Some(record_id.to_string());
        }
        current.push(EojeolAnalysis {
            surface: surface.to_string(),
            morphemes,
            record_id: Some(record_id.to_string()),
        });
    }
    flush(&mut current, &mut current_id);
    Ok(sentences)
}

/// Write a morph corpus: sense annotations and per-line record ids are
/// preserved; eojeols without a record id fall back to the sentence id.
pub fn write_morph_corpus(sentences: &[Sentence]) -> String {
    let mut out = String::new();
    for (i, sentence) in sentences.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for eojeol in &sentence.eojeols {
            let id = eojeol.record_id.as_deref().unwrap_or(&sentence.id);
            out.push_str(id);
            out.push('\t');
            out.push_str(&eojeol.surface);
            out.push('\t');
            out.push_str(&format_analysis(&eojeol.morphemes, true));
            out.push('\n');
        }
    }
    out
}
