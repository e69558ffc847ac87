//! CoNLL-U serialization of segmented sentences.
//!
//! One row per token: id, written form, lemma (the `+`-joined canonical
//! morpheme forms), universal POS, composite tag as xpos, then `_` padding
//! to ten columns with MISC last. A multiword-token range row precedes every
//! maximal run of two or more non-symbol tokens from one eojeol; symbol
//! tokens are never covered by a range. `SpaceAfter=No` in MISC marks a unit
//! (range or uncovered token) glued to the next unit of the same eojeol,
//! which together with the `# text` comment makes eojeol reassembly exact.

use std::fmt::Write as _;
use std::ops::Range;

use super::analysis::{escape_form, split_unescaped, unescape};
use super::FormatError;
use crate::granularity::render_groups;
use crate::model::{
    parse_composite_tag, EojeolAnalysis, Level, Morpheme, SegmentedSentence, Sentence, TokenGroup,
};
use crate::tags::{SejongTag, TagClass};

/// Lone ending jamo and the syllabified lemma the corpus writes for them.
const JAMO_LEMMAS: [(&str, &str); 4] = [("ㄴ", "은"), ("ㄹ", "을"), ("ㅁ", "음"), ("ㅂ", "습")];

fn jamo_lemma(form: &str) -> Option<&'static str> {
    JAMO_LEMMAS
        .iter()
        .find(|(jamo, _)| *jamo == form)
        .map(|&(_, lemma)| lemma)
}

fn primary_upos(tag: SejongTag) -> Option<&'static str> {
    use SejongTag::*;
    match tag {
        NNG | NNB | NR => Some("NOUN"),
        NNP => Some("PROPN"),
        NP => Some("PRON"),
        VV | VA | VX | VCP | VCN => Some("VERB"),
        MM => Some("DET"),
        MAG | MAJ => Some("ADV"),
        IC => Some("INTJ"),
        SN => Some("NUM"),
        SL | SH => Some("X"),
        _ => None,
    }
}

/// Universal POS of a token group. The last morpheme decides when it has a
/// primary mapping, so a copula-final group is a VERB; otherwise the first
/// mapped morpheme decides, so an ending-final group keeps its stem's class
/// (a noun plus adnominal ending stays NOUN). Groups with no mapped morpheme
/// at all fall back to the family of their last tag.
pub fn upos_of_group(token: &TokenGroup) -> &'static str {
    let last = token
        .morphemes
        .last()
        .expect("a token has at least one morpheme");
    if let Some(upos) = primary_upos(last.tag) {
        return upos;
    }
    for m in &token.morphemes {
        if let Some(upos) = primary_upos(m.tag) {
            return upos;
        }
    }
    match last.tag.class() {
        TagClass::CaseMarker => "ADP",
        TagClass::VerbalEnding => "PART",
        TagClass::Symbol => {
            if last.tag == SejongTag::SW {
                "SYM"
            } else {
                "PUNCT"
            }
        }
        // derivational affixes and roots pattern with endings; the residual
        // unanalyzable tags (NF/NV/NA) stay X
        TagClass::Lexical => {
            if last.tag.as_str().starts_with('X') {
                "PART"
            } else {
                "X"
            }
        }
    }
}

fn lemma_of(token: &TokenGroup) -> String {
    if let [single] = &token.morphemes[..] {
        if token.rendered_form == single.form {
            if let Some(lemma) = jamo_lemma(&single.form) {
                return lemma.to_string();
            }
        }
    }
    let parts: Vec<String> = token
        .morphemes
        .iter()
        .map(|m| escape_form(&m.form))
        .collect();
    parts.join("+")
}

/// One printable unit: a range row or an uncovered token row.
struct Unit {
    eojeol_index: usize,
    // ids covered: single token or inclusive range
    first_id: usize,
    last_id: usize,
}

/// Serialize one sentence, terminated by a blank line.
pub fn write_conllu(segmented: &SegmentedSentence) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# sent_id = {}", segmented.source.id);
    let _ = writeln!(out, "# granularity = {}", segmented.level.as_u8());
    let _ = writeln!(out, "# text = {}", segmented.source.surface_text());

    // assign ids and plan range rows eojeol by eojeol
    let mut units: Vec<Unit> = Vec::new();
    let mut rows: Vec<(usize, &TokenGroup)> = Vec::new(); // (id, token)
    let mut range_forms: Vec<Option<String>> = Vec::new(); // per unit: Some(form) for ranges
    let mut next_id = 1usize;
    let mut i = 0usize;
    while i < segmented.tokens.len() {
        let eojeol_index = segmented.tokens[i].eojeol_index;
        let mut end = i;
        while end < segmented.tokens.len() && segmented.tokens[end].eojeol_index == eojeol_index {
            end += 1;
        }
        let eojeol_tokens = &segmented.tokens[i..end];
        let eojeol = &segmented.source.eojeols[eojeol_index];
        plan_eojeol(
            eojeol,
            eojeol_index,
            eojeol_tokens,
            &mut next_id,
            &mut units,
            &mut rows,
            &mut range_forms,
        );
        i = end;
    }

    // a unit followed by a unit of the same eojeol is written without a space
    let mut row_iter = rows.iter().peekable();
    for (u, unit) in units.iter().enumerate() {
        let glued = units
            .get(u + 1)
            .is_some_and(|n| n.eojeol_index == unit.eojeol_index);
        let misc = if glued { "SpaceAfter=No" } else { "_" };
        if let Some(form) = &range_forms[u] {
            let _ = writeln!(
                out,
                "{}-{}\t{}\t_\t_\t_\t_\t_\t_\t_\t{}",
                unit.first_id, unit.last_id, form, misc
            );
        }
        while let Some(&&(id, token)) = row_iter.peek() {
            if id > unit.last_id {
                break;
            }
            row_iter.next();
            // tokens covered by a range leave spacing to the range row
            let covered = range_forms[u].is_some();
            let token_misc = if covered { "_" } else { misc };
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t_\t_\t_\t_\t{}",
                id,
                token.rendered_form,
                lemma_of(token),
                upos_of_group(token),
                token.composite_tag(),
                token_misc
            );
        }
    }
    out.push('\n');
    out
}

fn plan_eojeol<'t>(
    eojeol: &EojeolAnalysis,
    eojeol_index: usize,
    tokens: &'t [TokenGroup],
    next_id: &mut usize,
    units: &mut Vec<Unit>,
    rows: &mut Vec<(usize, &'t TokenGroup)>,
    range_forms: &mut Vec<Option<String>>,
) {
    // maximal runs of non-symbol tokens; runs of >=2 become range rows
    let mut runs: Vec<Range<usize>> = Vec::new();
    let mut t = 0usize;
    while t < tokens.len() {
        if tokens[t].is_symbol() {
            runs.push(t..t + 1);
            t += 1;
        } else {
            let start = t;
            while t < tokens.len() && !tokens[t].is_symbol() {
                t += 1;
            }
            runs.push(start..t);
        }
    }
    // written forms with every multi-token run merged into one group
    let merged: Vec<Range<usize>> = runs
        .iter()
        .map(|r| tokens[r.start].morpheme_range.start..tokens[r.end - 1].morpheme_range.end)
        .collect();
    let merged_forms = render_groups(eojeol, &merged);

    for (run, run_form) in runs.into_iter().zip(merged_forms) {
        let width = run.len();
        let first_id = *next_id;
        let last_id = first_id + width - 1;
        for token in &tokens[run] {
            rows.push((*next_id, token));
            *next_id += 1;
        }
        let is_range = width >= 2;
        units.push(Unit {
            eojeol_index,
            first_id,
            last_id,
        });
        range_forms.push(if is_range { Some(run_form) } else { None });
    }
}

/// Serialize a corpus: sentences in order, each ending with its blank line.
pub fn write_conllu_corpus(segmented: &[SegmentedSentence]) -> String {
    segmented.iter().map(write_conllu).collect()
}

/// Read a CoNLL-U corpus written by [`write_conllu`] (or a compatible
/// tagger). The granularity level comes from the `# granularity` comment.
pub fn read_conllu(text: &str) -> Result<Vec<SegmentedSentence>, FormatError> {
    read_conllu_with_level(text, None)
}

struct RawRow {
    line: usize,
    first_id: usize,
    last_id: usize, // == first_id for plain token rows
    is_range: bool,
    form: String,
    lemma: String,
    xpos: String,
    space_after_no: bool,
}

/// Read with a fallback level for files lacking the granularity comment.
pub fn read_conllu_with_level(
    text: &str,
    fallback: Option<Level>,
) -> Result<Vec<SegmentedSentence>, FormatError> {
    let mut sentences = Vec::new();
    let mut block: Vec<(usize, &str)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.is_empty() {
            if !block.is_empty() {
                sentences.push(read_sentence(&block, fallback, sentences.len())?);
                block.clear();
            }
        } else {
            block.push((i + 1, line));
        }
    }
    if !block.is_empty() {
        sentences.push(read_sentence(&block, fallback, sentences.len())?);
    }
    Ok(sentences)
}

fn read_sentence(
    block: &[(usize, &str)],
    fallback: Option<Level>,
    index: usize,
) -> Result<SegmentedSentence, FormatError> {
    let first_line = block[0].0;
    let mut sent_id: Option<String> = None;
    let mut level: Option<Level> = None;
    let mut text_comment: Option<String> = None;
    let mut rows: Vec<RawRow> = Vec::new();

    for &(lineno, line) in block {
        if let Some(comment) = line.strip_prefix('#') {
            let comment = comment.trim_start();
            if let Some((key, value)) = comment.split_once(" = ") {
                match key {
                    "sent_id" => sent_id = Some(value.to_string()),
                    "text" => text_comment = Some(value.to_string()),
                    "granularity" => {
                        level = Some(value.parse().map_err(|e| FormatError::new(lineno, e))?)
                    }
                    _ => {}
                }
            }
            continue;
        }
        rows.push(parse_row(lineno, line)?);
    }

    let level = level.or(fallback).ok_or_else(|| {
        FormatError::new(
            first_line,
            "missing '# granularity' comment and no fallback level",
        )
    })?;
    if rows.is_empty() {
        return Err(FormatError::new(first_line, "sentence has no token rows"));
    }

    // validate ids and pair ranges with their covered token rows
    struct ReadUnit {
        form: String,
        space_after_no: bool,
        tokens: Range<usize>, // indices into `decoded`
        is_symbol: bool,
    }
    let mut decoded: Vec<(String, Vec<Morpheme>)> = Vec::new();
    let mut units: Vec<ReadUnit> = Vec::new();
    let mut next_id = 1usize;
    let mut open_range: Option<usize> = None; // last covered id of the open range
    for row in &rows {
        if row.is_range {
            if open_range.is_some() {
                return Err(FormatError::new(
                    row.line,
                    "overlapping multiword-token ranges",
                ));
            }
            if row.first_id != next_id {
                return Err(FormatError::new(
                    row.line,
                    format!("range must start at id {next_id}, got {}", row.first_id),
                ));
            }
            if row.last_id < row.first_id {
                return Err(FormatError::new(row.line, "empty multiword-token range"));
            }
            units.push(ReadUnit {
                form: row.form.clone(),
                space_after_no: row.space_after_no,
                tokens: decoded.len()..decoded.len(),
                is_symbol: false,
            });
            open_range = Some(row.last_id);
            continue;
        }
        if row.first_id != next_id {
            return Err(FormatError::new(
                row.line,
                format!(
                    "non-consecutive id: expected {next_id}, got {}",
                    row.first_id
                ),
            ));
        }
        let morphemes = decode_morphemes(row)?;
        let is_symbol = morphemes.iter().all(|m| m.tag.class() == TagClass::Symbol);
        decoded.push((row.form.clone(), morphemes));
        match open_range {
            Some(end) => {
                units.last_mut().unwrap().tokens.end += 1;
                if row.first_id == end {
                    open_range = None;
                }
            }
            None => units.push(ReadUnit {
                form: row.form.clone(),
                space_after_no: row.space_after_no,
                tokens: decoded.len() - 1..decoded.len(),
                is_symbol,
            }),
        }
        next_id += 1;
    }
    if open_range.is_some() {
        return Err(FormatError::new(
            first_line,
            "multiword-token range extends past the last row",
        ));
    }

    // Reassemble eojeols. Trust order: explicit SpaceAfter=No bookkeeping,
    // then alignment against the '# text' comment, then a heuristic that
    // glues symbol units to the preceding eojeol.
    let has_space_after = units.iter().any(|u| u.space_after_no);
    let mut eojeol_of_unit: Vec<usize> = Vec::with_capacity(units.len());
    if has_space_after {
        let mut current = 0usize;
        for (u, unit) in units.iter().enumerate() {
            eojeol_of_unit.push(current);
            if !unit.space_after_no && u + 1 < units.len() {
                current += 1;
            }
        }
    } else if let Some(text) = &text_comment {
        let expected: Vec<&str> = text.split(' ').collect();
        let mut current = 0usize;
        let mut acc = String::new();
        for unit in &units {
            if current >= expected.len() {
                return Err(FormatError::new(
                    first_line,
                    "'# text' has fewer eojeols than the rows",
                ));
            }
            acc.push_str(&unit.form);
            eojeol_of_unit.push(current);
            if acc == expected[current] {
                current += 1;
                acc.clear();
            } else if !expected[current].starts_with(acc.as_str()) {
                return Err(FormatError::new(
                    first_line,
                    format!(
                        "rows do not align with '# text' at eojeol {:?}",
                        expected[current]
                    ),
                ));
            }
        }
        if !acc.is_empty() || current != expected.len() {
            return Err(FormatError::new(
                first_line,
                "'# text' has more eojeols than the rows",
            ));
        }
    } else {
        let mut current = 0usize;
        for (u, unit) in units.iter().enumerate() {
            if u > 0 && !unit.is_symbol {
                current += 1;
            }
            eojeol_of_unit.push(current);
        }
    }

    // materialize eojeols and tokens
    let mut eojeols: Vec<EojeolAnalysis> = Vec::new();
    let mut tokens: Vec<TokenGroup> = Vec::new();
    let mut morpheme_cursor = 0usize;
    for (u, unit) in units.iter().enumerate() {
        let eojeol_index = eojeol_of_unit[u];
        if eojeol_index == eojeols.len() {
            eojeols.push(EojeolAnalysis {
                surface: String::new(),
                morphemes: Vec::new(),
                record_id: None,
            });
            morpheme_cursor = 0;
        }
        let eojeol = eojeols.last_mut().unwrap();
        eojeol.surface.push_str(&unit.form);
        for (form, morphemes) in &decoded[unit.tokens.clone()] {
            let start = morpheme_cursor;
            morpheme_cursor += morphemes.len();
            tokens.push(TokenGroup {
                eojeol_index,
                morpheme_range: start..morpheme_cursor,
                rendered_form: form.clone(),
                morphemes: morphemes.clone(),
                analysis_complete: true,
            });
            eojeol.morphemes.extend(morphemes.iter().cloned());
        }
    }

    let source = Sentence {
        id: sent_id.unwrap_or_else(|| format!("s{}", index + 1)),
        eojeols,
    };
    Ok(SegmentedSentence {
        level,
        tokens,
        source,
    })
}

fn parse_row(lineno: usize, line: &str) -> Result<RawRow, FormatError> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() < 5 || cols.len() > 10 {
        return Err(FormatError::new(
            lineno,
            format!("expected 5 to 10 tab-separated columns, got {}", cols.len()),
        ));
    }
    let misc = if cols.len() == 10 { cols[9] } else { "_" };
    let space_after_no = misc.split('|').any(|f| f == "SpaceAfter=No");
    let (first_id, last_id, is_range) = match cols[0].split_once('-') {
        Some((a, b)) => {
            let a = a
                .parse()
                .map_err(|_| FormatError::new(lineno, format!("bad range id {:?}", cols[0])))?;
            let b = b
                .parse()
                .map_err(|_| FormatError::new(lineno, format!("bad range id {:?}", cols[0])))?;
            (a, b, true)
        }
        None => {
            let id = cols[0]
                .parse()
                .map_err(|_| FormatError::new(lineno, format!("bad id {:?}", cols[0])))?;
            (id, id, false)
        }
    };
    if is_range && (cols[2], cols[3], cols[4]) != ("_", "_", "_") {
        return Err(FormatError::new(
            lineno,
            "range rows must have '_' lemma/upos/xpos",
        ));
    }
    Ok(RawRow {
        line: lineno,
        first_id,
        last_id,
        is_range,
        form: cols[1].to_string(),
        lemma: cols[2].to_string(),
        xpos: cols[4].to_string(),
        space_after_no,
    })
}

fn decode_morphemes(row: &RawRow) -> Result<Vec<Morpheme>, FormatError> {
    let tags =
        parse_composite_tag(&row.xpos).map_err(|e| FormatError::new(row.line, format!("{e}")))?;
    if let [tag] = tags[..] {
        if jamo_lemma(&row.form) == Some(row.lemma.as_str()) {
            // the lemma column syllabifies lone ending jamo; the morpheme
            // keeps the jamo form
            return Ok(vec![Morpheme::new(row.form.clone(), tag)]);
        }
    }
    let parts = split_unescaped(&row.lemma, '+', row.line)?;
    if parts.len() != tags.len() {
        return Err(FormatError::new(
            row.line,
            format!(
                "lemma has {} parts but xpos {:?} has {} tags",
                parts.len(),
                row.xpos,
                tags.len()
            ),
        ));
    }
    Ok(parts
        .iter()
        .zip(tags)
        .map(|(part, tag)| Morpheme::new(unescape(part), tag))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::granularity::segment_sentence;
    use crate::tags::SejongTag::*;

    fn verb_sentence() -> Sentence {
        Sentence {
            id: "BTAA0001-00000012".into(),
            eojeols: vec![
                EojeolAnalysis::new(
                    "웅가로가",
                    vec![Morpheme::new("웅가로", NNP), Morpheme::new("가", JKS)],
                ),
                EojeolAnalysis::new(
                    "나섰다.",
                    vec![
                        Morpheme::new("나서", VV),
                        Morpheme::new("었", EP),
                        Morpheme::new("다", EF),
                        Morpheme::new(".", SF),
                    ],
                ),
            ],
        }
    }

    #[test]
    fn level3_writes_range_rows_for_split_eojeols() {
        let text = write_conllu(&segment_sentence(&verb_sentence(), Level::L3));
        let expected = "\
# sent_id = BTAA0001-00000012
# granularity = 3
# text = 웅가로가 나섰다.
1-2\t웅가로가\t_\t_\t_\t_\t_\t_\t_\t_
1\t웅가로\t웅가로\tPROPN\tNNP\t_\t_\t_\t_\t_
2\t가\t가\tADP\tJKS\t_\t_\t_\t_\t_
3\t나섰다\t나서+었+다\tVERB\tVV+EP+EF\t_\t_\t_\t_\tSpaceAfter=No
4\t.\t.\tPUNCT\tSF\t_\t_\t_\t_\t_

";
        assert_eq!(text, expected);
    }

    #[test]
    fn level4_covers_the_verb_run_and_lemmatizes_jamo() {
        let sentence = Sentence {
            id: "t".into(),
            eojeols: vec![EojeolAnalysis::new(
                "세계적인",
                vec![
                    Morpheme::new("세계", NNG),
                    Morpheme::new("적", XSN),
                    Morpheme::new("이", VCP),
                    Morpheme::new("ㄴ", ETM),
                ],
            )],
        };
        let text = write_conllu(&segment_sentence(&sentence, Level::L4));
        assert!(text.contains("1-2\t세계적인\t_"), "{text}");
        assert!(
            text.contains("1\t세계적이\t세계+적+이\tVERB\tNNG+XSN+VCP"),
            "{text}"
        );
        assert!(text.contains("2\tㄴ\t은\tPART\tETM"), "{text}");
    }

    #[test]
    fn ending_final_groups_keep_the_stem_class() {
        // unsplit 세계적인 ends with an adnominal ending, so the noun stem
        // decides; once the copula is final (level 4) the group is verbal
        let sentence = Sentence {
            id: "t".into(),
            eojeols: vec![EojeolAnalysis::new(
                "세계적인",
                vec![
                    Morpheme::new("세계", NNG),
                    Morpheme::new("적", XSN),
                    Morpheme::new("이", VCP),
                    Morpheme::new("ㄴ", ETM),
                ],
            )],
        };
        for level in [Level::L1, Level::L2, Level::L3] {
            let text = write_conllu(&segment_sentence(&sentence, level));
            assert!(
                text.contains("1\t세계적인\t세계+적+이+ㄴ\tNOUN\tNNG+XSN+VCP+ETM"),
                "{level:?}: {text}"
            );
        }
    }

    #[test]
    fn round_trips_each_level_through_bytes() {
        let sentence = verb_sentence();
        for level in Level::ALL {
            let segmented = segment_sentence(&sentence, level);
            let text = write_conllu(&segmented);
            let back = read_conllu(&text).unwrap();
            assert_eq!(back.len(), 1, "{level}");
            assert_eq!(write_conllu(&back[0]), text, "{level}");
            assert_eq!(back[0].source, sentence, "{level}");
            assert_eq!(back[0].tokens, segmented.tokens, "{level}");
        }
    }

    #[test]
    fn rejects_malformed_structure() {
        let bad_ids = "# granularity = 1\n1\ta\ta\tX\tNNG\n3\tb\tb\tX\tNNG\n";
        assert!(read_conllu(bad_ids)
            .unwrap_err()
            .message
            .contains("non-consecutive"));
        let overlap = "# granularity = 1\n1-3\tab\t_\t_\t_\n1\ta\ta\tX\tNNG\n2-4\tbc\t_\t_\t_\n";
        assert!(read_conllu(overlap).unwrap_err().message.contains("range"));
        let no_level = "1\ta\ta\tX\tNNG\n";
        assert!(read_conllu(no_level).is_err());
        assert!(read_conllu_with_level(no_level, Some(Level::L1)).is_ok());
    }

    #[test]
    fn reassembles_eojeols_without_misc_via_text_comment() {
        // five columns only, as an external tagger might emit
        let text = "\
# granularity = 2
# text = 웅가로가 나섰다.
1\t웅가로가\t웅가로+가\tPROPN\tNNP+JKS
2\t나섰다\t나서+었+다\tVERB\tVV+EP+EF
3\t.\t.\tPUNCT\tSF
";
        let read = read_conllu(text).unwrap();
        let eojeols = &read[0].source.eojeols;
        assert_eq!(eojeols.len(), 2);
        assert_eq!(eojeols[1].surface, "나섰다.");
        assert_eq!(read[0].tokens[1].eojeol_index, 1);
    }

    #[test]
    fn symbol_glue_heuristic_applies_without_text_or_misc() {
        let text = "\
# granularity = 2
1\t웅가로가\t웅가로+가\tPROPN\tNNP+JKS
2\t나섰다\t나서+었+다\tVERB\tVV+EP+EF
3\t.\t.\tPUNCT\tSF
";
        let read = read_conllu(text).unwrap();
        assert_eq!(read[0].source.eojeols.len(), 2);
        assert_eq!(read[0].source.eojeols[1].surface, "나섰다.");
    }
}
