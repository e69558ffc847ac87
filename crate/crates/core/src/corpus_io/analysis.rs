//! The `form/TAG(+form/TAG)*` analysis-string syntax shared by the morph
//! corpus, tree leaves, and CoNLL-U lemma columns.
//!
//! `/` and `+` are structural, so symbol forms containing them are escaped
//! with a backslash. Writers escape the minimal set for their format (this
//! module's: `\` `/` `+`; tree leaves additionally escape parentheses);
//! the parser accepts a backslash before any character.

use super::FormatError;
use crate::model::Morpheme;
use crate::tags::SejongTag;

/// Characters every analysis writer escapes.
const STRUCTURAL: [char; 3] = ['\\', '/', '+'];

pub(crate) fn push_escaped(out: &mut String, text: &str, extra: &[char]) {
    for c in text.chars() {
        if STRUCTURAL.contains(&c) || extra.contains(&c) {
            out.push('\\');
        }
        out.push(c);
    }
}

pub(crate) fn escape_form(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    push_escaped(&mut out, text, &[]);
    out
}

/// Format morphemes as `form/TAG+form/TAG`, optionally with `__NN` sense
/// suffixes on sense-tagged forms.
pub fn format_analysis(morphemes: &[Morpheme], include_senses: bool) -> String {
    let mut out = String::new();
    for (i, m) in morphemes.iter().enumerate() {
        if i > 0 {
            out.push('+');
        }
        push_escaped(&mut out, &m.form, &[]);
        if include_senses {
            if let Some(sense) = m.sense {
                out.push_str(&format!("__{sense:02}"));
            }
        }
        out.push('/');
        out.push_str(m.tag.as_str());
    }
    out
}

/// Split `s` on every unescaped occurrence of `sep`, keeping escapes intact
/// inside the pieces. A trailing lone backslash is reported as an error.
pub(crate) fn split_unescaped(s: &str, sep: char, line: usize) -> Result<Vec<String>, FormatError> {
    let mut parts = vec![String::new()];
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            match chars.next() {
                Some(next) => {
                    let last = parts.last_mut().unwrap();
                    last.push('\\');
                    last.push(next);
                }
                None => return Err(FormatError::new(line, "dangling escape at end of field")),
            }
        } else if c == sep {
            parts.push(String::new());
        } else {
            parts.last_mut().unwrap().push(c);
        }
    }
    Ok(parts)
}

pub(crate) fn unescape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            if let Some(next) = chars.next() {
                out.push(next);
            }
        } else {
            out.push(c);
        }
    }
    out
}

/// Strip a trailing `__NN` sense annotation. Only a two-digit suffix on an
/// otherwise non-empty form counts; anything else is part of the form.
fn split_sense(form: &str) -> (&str, Option<u8>) {
    let bytes = form.as_bytes();
    if bytes.len() > 4 {
        let tail = &bytes[bytes.len() - 4..];
        if tail[0] == b'_'
            && tail[1] == b'_'
            && tail[2].is_ascii_digit()
            && tail[3].is_ascii_digit()
        {
            let sense = (tail[2] - b'0') * 10 + (tail[3] - b'0');
            return (&form[..form.len() - 4], Some(sense));
        }
    }
    (form, None)
}

/// Parse a `form/TAG(+form/TAG)*` analysis string. `line` positions errors.
pub fn parse_analysis(s: &str, line: usize) -> Result<Vec<Morpheme>, FormatError> {
    let parts = split_unescaped(s, '+', line)?;
    let mut morphemes = Vec::with_capacity(parts.len());
    for part in &parts {
        if part.is_empty() {
            return Err(FormatError::new(
                line,
                format!("empty morpheme in analysis {s:?}"),
            ));
        }
        let fields = split_unescaped(part, '/', line)?;
        if fields.len() != 2 {
            return Err(FormatError::new(
                line,
                format!("morpheme {part:?} must be form/TAG with one unescaped '/'"),
            ));
        }
        let raw_form = unescape(&fields[0]);
        let (form, sense) = split_sense(&raw_form);
        if form.is_empty() {
            return Err(FormatError::new(
                line,
                format!("empty form in morpheme {part:?}"),
            ));
        }
        let tag: SejongTag = fields[1]
            .parse()
            .map_err(|e| FormatError::new(line, format!("{e}")))?;
        morphemes.push(Morpheme {
            form: form.to_string(),
            tag,
            sense,
        });
    }
    Ok(morphemes)
}
