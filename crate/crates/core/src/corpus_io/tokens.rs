//! Whitespace-token lines, the shape machine-translation toolkits consume.
//!
//! One sentence per line, written token forms joined by single spaces. The
//! format keeps no analyses and no eojeol boundaries; it exists as an export
//! target and as input to token-level metrics.

use crate::model::SegmentedSentence;

/// Serialize sentences as space-joined written forms, one line each.
pub fn write_tokens(segmented: &[SegmentedSentence]) -> String {
    let mut out = String::new();
    for sentence in segmented {
        let mut first = true;
        for token in &sentence.tokens {
            if !first {
                out.push(' ');
            }
            out.push_str(&token.rendered_form);
            first = false;
        }
        out.push('\n');
    }
    out
}

/// Read token lines. Every line is one sentence, including empty ones.
pub fn read_tokens(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .map(|line| line.split_whitespace().map(str::to_string).collect())
        .collect()
}
