//! The five-level segmentation cascade.
//!
//! Level 1 keeps eojeols whole; Level 2 splits off symbols; Level 3
//! additionally splits case markers and particles; Level 4 additionally
//! splits verbal endings; Level 5 splits every morpheme. Conversion only ever
//! refines: a higher level's token boundaries are a superset of a lower
//! level's.
//!
//! Surface recovery is the delicate part. Korean spelling fuses and contracts
//! morphemes (세계적이+ㄴ is written 세계적인, 나서+었+다 is written 나섰다),
//! so a token's written form cannot always be sliced out of the eojeol. The
//! renderer aligns group boundaries right to left: a group whose canonical
//! form is an exact surface suffix is sliced off; a group starting with a
//! lone ending jamo (ㄴ/ㄹ/ㅁ/ㅂ) may claim that jamo from the final
//! consonant of the preceding syllable; anything else makes the whole eojeol
//! fall back to canonical morpheme forms, never to synthesized contractions.

use std::collections::BTreeMap;
use std::ops::Range;

use thiserror::Error;

use crate::hangul;
use crate::model::{
    EojeolAnalysis, Level, Morpheme, SegmentedSentence, Sentence, SyntaxTree, TokenGroup,
};
use crate::tags::{SejongTag, TagClass};

/// How Level 2-4 treat symbol morphemes. `All` is the cascade's behavior;
/// `QuotesOnly` reproduces treebank-style tokenization where quotation marks
/// and brackets (SS) are the only symbols written as separate tokens.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SymbolSplit {
    #[default]
    All,
    QuotesOnly,
}

/// Errors for structurally invalid token streams and trees.
#[derive(Debug, Error)]
pub enum StructureError {
    #[error(
        "tokens of eojeol {eojeol} do not tile its morphemes (expected next index {expected})"
    )]
    RangeGap { eojeol: usize, expected: usize },
    #[error("token stream references eojeol {index} but the sentence has {count} eojeols")]
    EojeolOutOfRange { index: usize, count: usize },
    #[error("no tokens cover eojeol {0}")]
    MissingEojeol(usize),
    #[error("tree leaf {0} is not a whole Level-1 eojeol token")]
    NotEojeolLeaf(usize),
    #[error("tree leaf {0} carries no stored morpheme analysis")]
    MissingAnalysis(usize),
    #[error("tree has {tree} eojeol leaves but the sentence has {sentence} eojeols")]
    LeafCountMismatch { tree: usize, sentence: usize },
    #[error("tree leaf {leaf} analysis disagrees with the sentence: {tree_analysis} vs {sentence_analysis}")]
    LeafAnalysisMismatch {
        leaf: usize,
        tree_analysis: String,
        sentence_analysis: String,
    },
}

fn splits_here(level: Level, tag: SejongTag, symbols: SymbolSplit) -> bool {
    let class = tag.class();
    if !level.splits(class) {
        return false;
    }
    // The quotes-only mode keeps non-SS symbols attached at Levels 2-4;
    // Level 5 separates every morpheme regardless.
    if class == TagClass::Symbol
        && symbols == SymbolSplit::QuotesOnly
        && level != Level::L5
        && tag != SejongTag::SS
    {
        return false;
    }
    true
}

/// Partition an eojeol's morphemes into the token groups of `level`:
/// singleton ranges for morphemes whose class splits at this level, maximal
/// runs for the rest. Ranges tile `0..morphemes.len()` in order.
pub fn partition_eojeol(analysis: &EojeolAnalysis, level: Level) -> Vec<Range<usize>> {
    partition_eojeol_with(analysis, level, SymbolSplit::All)
}

pub fn partition_eojeol_with(
    analysis: &EojeolAnalysis,
    level: Level,
    symbols: SymbolSplit,
) -> Vec<Range<usize>> {
    let mut ranges = Vec::new();
    let mut run_start: Option<usize> = None;
    for (i, m) in analysis.morphemes.iter().enumerate() {
        if splits_here(level, m.tag, symbols) {
            if let Some(start) = run_start.take() {
                ranges.push(start..i);
            }
            ranges.push(i..i + 1);
        } else if run_start.is_none() {
            run_start = Some(i);
        }
    }
    if let Some(start) = run_start {
        ranges.push(start..analysis.morphemes.len());
    }
    ranges
}

fn canonical_concat(morphemes: &[Morpheme]) -> String {
    morphemes.iter().map(|m| m.form.as_str()).collect()
}

/// Render the written form of every group of a partition.
///
/// A single group covering the whole eojeol renders as the surface verbatim.
/// Otherwise boundaries are aligned right to left as described in the module
/// docs; if any boundary cannot be aligned, every group falls back to its
/// canonical morpheme concatenation (나서+었+다 renders 나서었다 as one group
/// or 나서/었/다 split, never a partial contraction).
pub fn render_groups(analysis: &EojeolAnalysis, ranges: &[Range<usize>]) -> Vec<String> {
    if ranges.len() == 1 && ranges[0] == (0..analysis.morphemes.len()) {
        return vec![analysis.surface.clone()];
    }
    let fallback = || {
        ranges
            .iter()
            .map(|r| canonical_concat(&analysis.morphemes[r.clone()]))
            .collect::<Vec<_>>()
    };

    let mut remaining: Vec<char> = analysis.surface.chars().collect();
    let mut rendered: Vec<String> = vec![String::new(); ranges.len()];
    for i in (1..ranges.len()).rev() {
        let form = canonical_concat(&analysis.morphemes[ranges[i].clone()]);
        let chars: Vec<char> = form.chars().collect();
        if remaining.len() > chars.len() && remaining.ends_with(&chars) {
            remaining.truncate(remaining.len() - chars.len());
            rendered[i] = form;
            continue;
        }
        // A group starting with a lone ending jamo may take that jamo from
        // the tail of the syllable it fused into: 세계적이+ㄴ over 세계적인,
        // or 가+ㄴ다 over 간다.
        let rest = &chars[1..];
        let fused = hangul::is_lone_ending_jamo(chars[0])
            && remaining.len() > rest.len()
            && remaining.ends_with(rest);
        if fused {
            let host_pos = remaining.len() - rest.len() - 1;
            if let Some(stripped) = hangul::strip_tail(remaining[host_pos], chars[0]) {
                remaining.truncate(host_pos);
                remaining.push(stripped);
                rendered[i] = form;
                continue;
            }
        }
        return fallback();
    }
    if remaining.is_empty() {
        return fallback();
    }
    rendered[0] = remaining.into_iter().collect();
    rendered
}

/// Segment one sentence at `level`.
pub fn segment_sentence(sentence: &Sentence, level: Level) -> SegmentedSentence {
    segment_sentence_with(sentence, level, SymbolSplit::All)
}

pub fn segment_sentence_with(
    sentence: &Sentence,
    level: Level,
    symbols: SymbolSplit,
) -> SegmentedSentence {
    let mut tokens = Vec::new();
    for (eojeol_index, eojeol) in sentence.eojeols.iter().enumerate() {
        let ranges = partition_eojeol_with(eojeol, level, symbols);
        let forms = render_groups(eojeol, &ranges);
        for (range, rendered_form) in ranges.into_iter().zip(forms) {
            tokens.push(TokenGroup {
                eojeol_index,
                morpheme_range: range.clone(),
                rendered_form,
                morphemes: eojeol.morphemes[range].to_vec(),
                analysis_complete: true,
            });
        }
    }
    SegmentedSentence {
        level,
        tokens,
        source: sentence.clone(),
    }
}

/// Segment a whole corpus.
pub fn segment_corpus(corpus: &[Sentence], level: Level) -> Vec<SegmentedSentence> {
    corpus.iter().map(|s| segment_sentence(s, level)).collect()
}

/// Merge a segmented sentence back to Level-1 eojeols: one
/// `(surface, analysis string)` pair per eojeol, analysis formatted as
/// `form/TAG+form/TAG` without sense numbers. The tokens must tile every
/// eojeol of the source exactly.
pub fn merge_to_level1(
    segmented: &SegmentedSentence,
) -> Result<Vec<(String, String)>, StructureError> {
    let count = segmented.source.eojeols.len();
    let mut per_eojeol: BTreeMap<usize, Vec<&TokenGroup>> = BTreeMap::new();
    for token in &segmented.tokens {
        if token.eojeol_index >= count {
            return Err(StructureError::EojeolOutOfRange {
                index: token.eojeol_index,
                count,
            });
        }
        per_eojeol
            .entry(token.eojeol_index)
            .or_default()
            .push(token);
    }
    let mut out = Vec::with_capacity(count);
    for (i, eojeol) in segmented.source.eojeols.iter().enumerate() {
        let tokens = per_eojeol
            .remove(&i)
            .ok_or(StructureError::MissingEojeol(i))?;
        let mut expected = 0usize;
        let mut morphemes: Vec<Morpheme> = Vec::with_capacity(eojeol.morphemes.len());
        for token in &tokens {
            if token.morpheme_range.start != expected {
                return Err(StructureError::RangeGap {
                    eojeol: i,
                    expected,
                });
            }
            expected = token.morpheme_range.end;
            morphemes.extend(token.morphemes.iter().cloned());
        }
        if expected != eojeol.morphemes.len() {
            return Err(StructureError::RangeGap {
                eojeol: i,
                expected,
            });
        }
        let analysis = crate::corpus_io::format_analysis(&morphemes, false);
        out.push((eojeol.surface.clone(), analysis));
    }
    Ok(out)
}

fn eojeol_of_leaf(token: &TokenGroup) -> Result<EojeolAnalysis, StructureError> {
    if !token.analysis_complete {
        return Err(StructureError::MissingAnalysis(token.eojeol_index));
    }
    if token.morpheme_range.start != 0 || token.morpheme_range.len() != token.morphemes.len() {
        return Err(StructureError::NotEojeolLeaf(token.eojeol_index));
    }
    Ok(EojeolAnalysis {
        surface: token.rendered_form.clone(),
        morphemes: token.morphemes.clone(),
        record_id: None,
    })
}

/// Convert a tree whose terminals each cover a whole eojeol (a raw treebank
/// tree, or one already converted to Level 1) to `level`: every eojeol
/// terminal is replaced in place by the preterminal sequence of its groups;
/// all other phrase structure is untouched. The bracket skeleton above the
/// terminals is therefore identical at every level.
pub fn convert_tree(tree: &SyntaxTree, level: Level) -> Result<SyntaxTree, StructureError> {
    convert_tree_with(tree, level, SymbolSplit::All)
}

/// Same, with an explicit symbol-splitting policy.
pub fn convert_tree_with(
    tree: &SyntaxTree,
    level: Level,
    symbols: SymbolSplit,
) -> Result<SyntaxTree, StructureError> {
    match tree {
        SyntaxTree::Leaf { token } | SyntaxTree::Preterminal { token } => {
            Err(StructureError::NotEojeolLeaf(token.eojeol_index))
        }
        SyntaxTree::Phrase { label, children } => {
            let mut new_children = Vec::with_capacity(children.len());
            for child in children {
                match child {
                    SyntaxTree::Leaf { token } | SyntaxTree::Preterminal { token } => {
                        let eojeol = eojeol_of_leaf(token)?;
                        new_children.extend(eojeol_preterminals(
                            &eojeol,
                            token.eojeol_index,
                            level,
                            symbols,
                        ));
                    }
                    SyntaxTree::Phrase { .. } => {
                        new_children.push(convert_tree_with(child, level, symbols)?)
                    }
                }
            }
            Ok(SyntaxTree::Phrase {
                label: label.clone(),
                children: new_children,
            })
        }
    }
}

fn eojeol_preterminals(
    eojeol: &EojeolAnalysis,
    eojeol_index: usize,
    level: Level,
    symbols: SymbolSplit,
) -> Vec<SyntaxTree> {
    let ranges = partition_eojeol_with(eojeol, level, symbols);
    let forms = render_groups(eojeol, &ranges);
    ranges
        .into_iter()
        .zip(forms)
        .map(|(range, rendered_form)| {
            SyntaxTree::preterminal(TokenGroup {
                eojeol_index,
                morpheme_range: range.clone(),
                rendered_form,
                morphemes: eojeol.morphemes[range].to_vec(),
                analysis_complete: true,
            })
        })
        .collect()
}

/// Replace every multi-morpheme terminal by its morpheme-wise preterminal
/// sequence under the same parent. Converting to any level and then expanding
/// yields the same tree as converting straight to Level 5; raw treebank
/// leaves expand the same way. Idempotent on Level-5 trees.
pub fn expand_tree_to_level5(tree: &SyntaxTree) -> SyntaxTree {
    match tree {
        SyntaxTree::Leaf { token } | SyntaxTree::Preterminal { token } => {
            // A bare terminal root cannot be spliced into a parent; splitting
            // is only meaningful under a phrase.
            SyntaxTree::Preterminal {
                token: token.clone(),
            }
        }
        SyntaxTree::Phrase { label, children } => {
            let mut new_children = Vec::with_capacity(children.len());
            for child in children {
                match child {
                    SyntaxTree::Leaf { token } | SyntaxTree::Preterminal { token }
                        if token.morphemes.len() > 1 =>
                    {
                        new_children.extend(split_preterminal(token));
                    }
                    SyntaxTree::Leaf { token } => {
                        new_children.push(SyntaxTree::Preterminal {
                            token: token.clone(),
                        });
                    }
                    _ => new_children.push(expand_tree_to_level5(child)),
                }
            }
            SyntaxTree::Phrase {
                label: label.clone(),
                children: new_children,
            }
        }
    }
}

fn split_preterminal(token: &TokenGroup) -> Vec<SyntaxTree> {
    // Render the token as a miniature eojeol: its own rendered form plays the
    // surface. Fallback canonical forms are context-free, so this agrees with
    // rendering the whole eojeol at Level 5 directly.
    let mini = EojeolAnalysis {
        surface: token.rendered_form.clone(),
        morphemes: token.morphemes.clone(),
        record_id: None,
    };
    let ranges: Vec<Range<usize>> = (0..token.morphemes.len()).map(|i| i..i + 1).collect();
    let forms = render_groups(&mini, &ranges);
    token
        .morphemes
        .iter()
        .zip(forms)
        .enumerate()
        .map(|(i, (m, rendered_form))| {
            let start = token.morpheme_range.start + i;
            SyntaxTree::preterminal(TokenGroup {
                eojeol_index: token.eojeol_index,
                morpheme_range: start..start + 1,
                rendered_form,
                morphemes: vec![m.clone()],
                analysis_complete: token.analysis_complete,
            })
        })
        .collect()
}

/// Replace each raw leaf's written form with the true surface from an
/// aligned sentence (the morphologically analyzed view of the same text).
///
/// Treebank files store only the morpheme analysis per eojeol, so a reader
/// can reconstruct fused spellings (세계적인) but not contractions (나섰다,
/// written for 나서+었). Grafting the aligned sentence's surfaces restores
/// them. Leaves must match the sentence eojeol-for-eojeol on morpheme forms
/// and tags (sense numbers are ignored: the two views annotate them
/// inconsistently).
pub fn attach_surfaces(
    tree: &SyntaxTree,
    sentence: &Sentence,
) -> Result<SyntaxTree, StructureError> {
    let leaf_count = tree.leaf_count();
    if leaf_count != sentence.eojeols.len() {
        return Err(StructureError::LeafCountMismatch {
            tree: leaf_count,
            sentence: sentence.eojeols.len(),
        });
    }
    let mut next = 0usize;
    attach_rec(tree, sentence, &mut next)
}

fn attach_rec(
    tree: &SyntaxTree,
    sentence: &Sentence,
    next: &mut usize,
) -> Result<SyntaxTree, StructureError> {
    match tree {
        SyntaxTree::Phrase { label, children } => {
            let children = children
                .iter()
                .map(|c| attach_rec(c, sentence, next))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(SyntaxTree::Phrase {
                label: label.clone(),
                children,
            })
        }
        SyntaxTree::Leaf { token } | SyntaxTree::Preterminal { token } => {
            let index = *next;
            *next += 1;
            let eojeol = &sentence.eojeols[index];
            let agrees = token.morphemes.len() == eojeol.morphemes.len()
                && token
                    .morphemes
                    .iter()
                    .zip(&eojeol.morphemes)
                    .all(|(a, b)| a.form == b.form && a.tag == b.tag);
            if !token.analysis_complete || !agrees {
                return Err(StructureError::LeafAnalysisMismatch {
                    leaf: index,
                    tree_analysis: token.composite_tag(),
                    sentence_analysis: eojeol.composite_tag(),
                });
            }
            let mut token = token.clone();
            token.rendered_form = eojeol.surface.clone();
            token.morphemes = eojeol.morphemes.clone();
            Ok(match tree {
                SyntaxTree::Preterminal { .. } => SyntaxTree::Preterminal { token },
                _ => SyntaxTree::Leaf { token },
            })
        }
    }
}

/// Extract the eojeol sequence of a raw tree's frontier as a sentence.
/// Every terminal must be a whole-eojeol token with a complete analysis.
pub fn tree_to_sentence(
    tree: &SyntaxTree,
    id: impl Into<String>,
) -> Result<Sentence, StructureError> {
    let mut eojeols = Vec::new();
    for token in tree.leaves() {
        eojeols.push(eojeol_of_leaf(token)?);
    }
    Ok(Sentence {
        id: id.into(),
        eojeols,
    })
}

/// True when a symbol morpheme sits strictly between non-symbol morphemes,
/// e.g. an abbreviation period or an in-eojeol quote. Such eojeols still
/// split into maximal non-symbol runs; converters count them for reporting.
pub fn has_interior_symbol(analysis: &EojeolAnalysis) -> bool {
    let classes: Vec<bool> = analysis
        .morphemes
        .iter()
        .map(|m| m.tag.class() == TagClass::Symbol)
        .collect();
    let first_word = classes.iter().position(|s| !s);
    let last_word = classes.iter().rposition(|s| !s);
    match (first_word, last_word) {
        (Some(a), Some(b)) => classes[a..=b].iter().any(|s| *s),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tags::SejongTag::*;

    fn eojeol(surface: &str, morphemes: Vec<Morpheme>) -> EojeolAnalysis {
        EojeolAnalysis::new(surface, morphemes)
    }

    fn fused_adnominal() -> EojeolAnalysis {
        eojeol(
            "세계적인",
            vec![
                Morpheme::new("세계", NNG),
                Morpheme::new("적", XSN),
                Morpheme::new("이", VCP),
                Morpheme::new("ㄴ", ETM),
            ],
        )
    }

    fn contracted_verb() -> EojeolAnalysis {
        eojeol(
            "나섰다.",
            vec![
                Morpheme::new("나서", VV),
                Morpheme::new("었", EP),
                Morpheme::new("다", EF),
                Morpheme::new(".", SF),
            ],
        )
    }

    fn case_marked() -> EojeolAnalysis {
        eojeol(
            "웅가로가",
            vec![Morpheme::new("웅가로", NNP), Morpheme::new("가", JKS)],
        )
    }

    fn split_forms(analysis: &EojeolAnalysis, level: Level) -> Vec<String> {
        let ranges = partition_eojeol(analysis, level);
        render_groups(analysis, &ranges)
    }

    #[test]
    fn partitions_follow_the_cascade() {
        let e = contracted_verb();
        assert_eq!(partition_eojeol(&e, Level::L1), vec![0..4]);
        assert_eq!(partition_eojeol(&e, Level::L2), vec![0..3, 3..4]);
        assert_eq!(partition_eojeol(&e, Level::L3), vec![0..3, 3..4]);
        assert_eq!(
            partition_eojeol(&e, Level::L4),
            vec![0..1, 1..2, 2..3, 3..4]
        );
        assert_eq!(
            partition_eojeol(&e, Level::L5),
            vec![0..1, 1..2, 2..3, 3..4]
        );

        let f = fused_adnominal();
        assert_eq!(partition_eojeol(&f, Level::L2), vec![0..4]);
        assert_eq!(partition_eojeol(&f, Level::L4), vec![0..3, 3..4]);
        assert_eq!(
            partition_eojeol(&f, Level::L5),
            vec![0..1, 1..2, 2..3, 3..4]
        );
    }

    #[test]
    fn whole_eojeol_renders_as_surface() {
        let e = contracted_verb();
        assert_eq!(split_forms(&e, Level::L1), vec!["나섰다."]);
    }

    #[test]
    fn symbol_splits_by_suffix_match() {
        // The canonical concatenation 나서었다. differs from the surface, but
        // the trailing period is a clean suffix, so the rest stays surface.
        let e = contracted_verb();
        assert_eq!(split_forms(&e, Level::L2), vec!["나섰다", "."]);
    }

    #[test]
    fn contraction_falls_back_to_canonical_forms() {
        let e = contracted_verb();
        assert_eq!(split_forms(&e, Level::L4), vec!["나서", "었", "다", "."]);
        let g = eojeol(
            "갔다",
            vec![
                Morpheme::new("가", VV),
                Morpheme::new("았", EP),
                Morpheme::new("다", EF),
            ],
        );
        assert_eq!(split_forms(&g, Level::L5), vec!["가", "았", "다"]);
    }

    #[test]
    fn lone_jamo_claims_the_syllable_tail() {
        let f = fused_adnominal();
        assert_eq!(split_forms(&f, Level::L4), vec!["세계적이", "ㄴ"]);
        assert_eq!(split_forms(&f, Level::L5), vec!["세계", "적", "이", "ㄴ"]);
        // jamo-initial multi-character ending: 가+ㄴ다 written 간다
        let g = eojeol(
            "간다",
            vec![Morpheme::new("가", VV), Morpheme::new("ㄴ다", EF)],
        );
        assert_eq!(split_forms(&g, Level::L4), vec!["가", "ㄴ다"]);
    }

    #[test]
    fn exact_concatenation_slices_cleanly() {
        let e = case_marked();
        assert_eq!(split_forms(&e, Level::L3), vec!["웅가로", "가"]);
    }

    #[test]
    fn quotes_only_mode_keeps_other_symbols_attached() {
        let e = contracted_verb();
        let ranges = partition_eojeol_with(&e, Level::L2, SymbolSplit::QuotesOnly);
        assert_eq!(ranges, vec![0..4]);
        let quoted = eojeol(
            "'직물'",
            vec![
                Morpheme::new("'", SS),
                Morpheme::new("직물", NNG),
                Morpheme::new("'", SS),
            ],
        );
        let ranges = partition_eojeol_with(&quoted, Level::L2, SymbolSplit::QuotesOnly);
        assert_eq!(ranges, vec![0..1, 1..2, 2..3]);
        // Level 5 separates everything in either mode.
        let ranges = partition_eojeol_with(&e, Level::L5, SymbolSplit::QuotesOnly);
        assert_eq!(ranges.len(), 4);
    }

    #[test]
    fn merge_restores_analysis_strings() {
        let sentence = Sentence {
            id: "t1".into(),
            eojeols: vec![fused_adnominal(), case_marked(), contracted_verb()],
        };
        for level in Level::ALL {
            let segmented = segment_sentence(&sentence, level);
            let merged = merge_to_level1(&segmented).unwrap();
            assert_eq!(
                merged,
                vec![
                    (
                        "세계적인".to_string(),
                        "세계/NNG+적/XSN+이/VCP+ㄴ/ETM".to_string()
                    ),
                    ("웅가로가".to_string(), "웅가로/NNP+가/JKS".to_string()),
                    (
                        "나섰다.".to_string(),
                        "나서/VV+었/EP+다/EF+./SF".to_string()
                    ),
                ],
                "{level}"
            );
        }
    }

    #[test]
    fn merge_rejects_gaps() {
        let sentence = Sentence {
            id: "t1".into(),
            eojeols: vec![case_marked()],
        };
        let mut segmented = segment_sentence(&sentence, Level::L3);
        segmented.tokens.remove(1);
        assert!(matches!(
            merge_to_level1(&segmented),
            Err(StructureError::RangeGap { eojeol: 0, .. })
        ));
    }

    #[test]
    fn interior_symbols_are_detected() {
        let plain = contracted_verb();
        assert!(!has_interior_symbol(&plain)); // trailing period only
        let quoted = eojeol(
            "'직물'을",
            vec![
                Morpheme::new("'", SS),
                Morpheme::new("직물", NNG),
                Morpheme::new("'", SS),
                Morpheme::new("을", JKO),
            ],
        );
        assert!(has_interior_symbol(&quoted));
    }

    fn raw_leaf(analysis: &EojeolAnalysis, index: usize) -> SyntaxTree {
        SyntaxTree::Leaf {
            token: TokenGroup {
                eojeol_index: index,
                morpheme_range: 0..analysis.morphemes.len(),
                rendered_form: analysis.surface.clone(),
                morphemes: analysis.morphemes.clone(),
                analysis_complete: true,
            },
        }
    }

    fn two_eojeol_tree() -> SyntaxTree {
        SyntaxTree::phrase(
            "S",
            vec![
                SyntaxTree::phrase("NP-SBJ", vec![raw_leaf(&case_marked(), 0)]),
                SyntaxTree::phrase("VP", vec![raw_leaf(&contracted_verb(), 1)]),
            ],
        )
    }

    fn preterminal_pairs(tree: &SyntaxTree) -> Vec<(String, String)> {
        tree.leaves()
            .iter()
            .map(|t| (t.composite_tag(), t.rendered_form.clone()))
            .collect()
    }

    #[test]
    fn conversion_replaces_eojeol_terminals_in_place() {
        let tree = two_eojeol_tree();
        let l1 = convert_tree(&tree, Level::L1).unwrap();
        assert_eq!(
            preterminal_pairs(&l1),
            vec![
                ("NNP+JKS".to_string(), "웅가로가".to_string()),
                ("VV+EP+EF+SF".to_string(), "나섰다.".to_string()),
            ]
        );
        let l4 = convert_tree(&tree, Level::L4).unwrap();
        assert_eq!(
            preterminal_pairs(&l4),
            vec![
                ("NNP".to_string(), "웅가로".to_string()),
                ("JKS".to_string(), "가".to_string()),
                ("VV".to_string(), "나서".to_string()),
                ("EP".to_string(), "었".to_string()),
                ("EF".to_string(), "다".to_string()),
                ("SF".to_string(), ".".to_string()),
            ]
        );
        // the new preterminals sit under the original parents
        match &l4 {
            SyntaxTree::Phrase { label, children } => {
                assert_eq!(label, "S");
                assert_eq!(children.len(), 2);
                match &children[1] {
                    SyntaxTree::Phrase { label, children } => {
                        assert_eq!(label, "VP");
                        assert_eq!(children.len(), 4);
                        assert!(children.iter().all(SyntaxTree::is_preterminal));
                    }
                    _ => panic!("VP should stay a phrase"),
                }
            }
            _ => panic!("root should stay a phrase"),
        }
    }

    #[test]
    fn quotes_only_conversion_keeps_the_period_attached() {
        let tree = two_eojeol_tree();
        let l2 = convert_tree_with(&tree, Level::L2, SymbolSplit::QuotesOnly).unwrap();
        assert_eq!(
            preterminal_pairs(&l2),
            vec![
                ("NNP+JKS".to_string(), "웅가로가".to_string()),
                ("VV+EP+EF+SF".to_string(), "나섰다.".to_string()),
            ]
        );
    }

    #[test]
    fn expansion_agrees_with_direct_level5_conversion() {
        let tree = two_eojeol_tree();
        let direct = convert_tree(&tree, Level::L5).unwrap();
        for level in Level::ALL {
            let converted = convert_tree(&tree, level).unwrap();
            assert_eq!(expand_tree_to_level5(&converted), direct, "{level}");
        }
        // idempotent on an already fully split tree
        assert_eq!(expand_tree_to_level5(&direct), direct);
    }

    #[test]
    fn conversion_requires_complete_whole_eojeol_terminals() {
        let bare = raw_leaf(&case_marked(), 0);
        assert!(matches!(
            convert_tree(&bare, Level::L2),
            Err(StructureError::NotEojeolLeaf(0))
        ));
        let tree = two_eojeol_tree();
        let l3 = convert_tree(&tree, Level::L3).unwrap();
        // an L3 tree has sub-eojeol preterminals; re-converting is refused
        assert!(matches!(
            convert_tree(&l3, Level::L5),
            Err(StructureError::NotEojeolLeaf(_))
        ));
        // but a Level-1 conversion still covers whole eojeols and converts on
        let l1 = convert_tree(&tree, Level::L1).unwrap();
        assert_eq!(
            convert_tree(&l1, Level::L4).unwrap(),
            convert_tree(&tree, Level::L4).unwrap()
        );
    }

    #[test]
    fn surfaces_graft_from_an_aligned_sentence() {
        // a reader can only synthesize 나서었다. for the contracted eojeol
        let synthesized = eojeol(
            "나서었다.",
            vec![
                Morpheme::new("나서", VV),
                Morpheme::new("었", EP),
                Morpheme::new("다", EF),
                Morpheme::new(".", SF),
            ],
        );
        let tree = SyntaxTree::phrase(
            "S",
            vec![SyntaxTree::phrase("VP", vec![raw_leaf(&synthesized, 0)])],
        );
        let sentence = Sentence {
            id: "t1".into(),
            eojeols: vec![contracted_verb()],
        };
        let grafted = attach_surfaces(&tree, &sentence).unwrap();
        assert_eq!(grafted.leaves()[0].rendered_form, "나섰다.");

        let wrong = Sentence {
            id: "t1".into(),
            eojeols: vec![case_marked()],
        };
        assert!(matches!(
            attach_surfaces(&tree, &wrong),
            Err(StructureError::LeafAnalysisMismatch { leaf: 0, .. })
        ));
        let short = Sentence {
            id: "t1".into(),
            eojeols: vec![],
        };
        assert!(matches!(
            attach_surfaces(&tree, &short),
            Err(StructureError::LeafCountMismatch {
                tree: 1,
                sentence: 0
            })
        ));
    }

    #[test]
    fn frontier_extraction_recovers_the_sentence() {
        let tree = two_eojeol_tree();
        let sentence = tree_to_sentence(&tree, "t1").unwrap();
        assert_eq!(sentence.eojeols, vec![case_marked(), contracted_verb()]);
        // converted trees no longer carry whole eojeols
        let l4 = convert_tree(&tree, Level::L4).unwrap();
        assert!(tree_to_sentence(&l4, "t1").is_err());
    }

    #[test]
    fn refinement_nests_token_ranges() {
        let sentence = Sentence {
            id: "t1".into(),
            eojeols: vec![fused_adnominal(), contracted_verb()],
        };
        for pair in Level::ALL.windows(2) {
            let coarse = segment_sentence(&sentence, pair[0]);
            let fine = segment_sentence(&sentence, pair[1]);
            for token in &fine.tokens {
                let hosts = coarse
                    .tokens
                    .iter()
                    .filter(|c| {
                        c.eojeol_index == token.eojeol_index
                            && c.morpheme_range.start <= token.morpheme_range.start
                            && token.morpheme_range.end <= c.morpheme_range.end
                    })
                    .count();
                assert_eq!(hosts, 1);
            }
        }
    }
}
