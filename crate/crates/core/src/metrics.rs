//! Evaluation measures and corpus statistics.
//!
//! Four scores: precision/recall/f1 over word segments, exact-match POS
//! accuracy over Level-1 eojeols, labeled bracket f1 over constituency
//! trees, and corpus-level BLEU without smoothing. Plus per-level corpus
//! statistics (token count, morphologically-complex-word ratio, distinct
//! immediate nonterminal count) rendered as an aligned table or as
//! machine-readable `key=value` lines.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::corpus_io::format_analysis;
use crate::granularity::{segment_sentence_with, SymbolSplit};
use crate::model::{Level, SegmentedSentence, Sentence, SyntaxTree};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("gold has {gold} sentences but the prediction has {pred}")]
    SentenceCountMismatch { gold: usize, pred: usize },
    #[error("sentence {sentence}: gold has {gold} eojeols but the prediction has {pred}")]
    EojeolCountMismatch {
        sentence: usize,
        gold: usize,
        pred: usize,
    },
    #[error("sentence {sentence}, eojeol {eojeol}: gold surface {gold:?} but predicted {pred:?}")]
    SurfaceMismatch {
        sentence: usize,
        eojeol: usize,
        gold: String,
        pred: String,
    },
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("{references} reference lines but {hypotheses} hypothesis lines")]
    LineCountMismatch {
        references: usize,
        hypotheses: usize,
    },
}

/// Precision/recall/f1 with the raw counts they came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrfReport {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    /// gold items
    pub relevant: usize,
    /// predicted items
    pub retrieved: usize,
    pub matched: usize,
}

impl PrfReport {
    pub fn from_counts(matched: usize, relevant: usize, retrieved: usize) -> PrfReport {
        debug_assert!(matched <= relevant && matched <= retrieved);
        let precision = if retrieved > 0 {
            matched as f64 / retrieved as f64
        } else {
            0.0
        };
        let recall = if relevant > 0 {
            matched as f64 / relevant as f64
        } else {
            0.0
        };
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        PrfReport {
            precision,
            recall,
            f1,
            relevant,
            retrieved,
            matched,
        }
    }
}

/// Segment identity within one sentence: eojeol index, character span in
/// that eojeol's written token stream, and the written form.
fn segment_items(sentence: &SegmentedSentence) -> HashSet<(usize, usize, usize, &str)> {
    let mut items = HashSet::with_capacity(sentence.tokens.len());
    let mut eojeol = usize::MAX;
    let mut offset = 0usize;
    for token in &sentence.tokens {
        if token.eojeol_index != eojeol {
            eojeol = token.eojeol_index;
            offset = 0;
        }
        let width = token.rendered_form.chars().count();
        items.insert((eojeol, offset, offset + width, token.rendered_form.as_str()));
        offset += width;
    }
    items
}

/// Word-segmentation precision/recall/f1.
///
/// A segment matches when its eojeol, its character span within the eojeol's
/// written token stream, and its written form all agree. Both sides must
/// cover the same eojeol sequence; differing spellings of one eojeol's
/// stream (canonical-form fallbacks) cost matches rather than erroring.
pub fn segmentation_prf(
    gold: &[SegmentedSentence],
    pred: &[SegmentedSentence],
) -> Result<PrfReport, MetricsError> {
    if gold.len() != pred.len() {
        return Err(MetricsError::SentenceCountMismatch {
            gold: gold.len(),
            pred: pred.len(),
        });
    }
    let (mut matched, mut relevant, mut retrieved) = (0usize, 0usize, 0usize);
    for (i, (g, p)) in gold.iter().zip(pred).enumerate() {
        if g.source.eojeols.len() != p.source.eojeols.len() {
            return Err(MetricsError::EojeolCountMismatch {
                sentence: i,
                gold: g.source.eojeols.len(),
                pred: p.source.eojeols.len(),
            });
        }
        for (e, (ge, pe)) in g.source.eojeols.iter().zip(&p.source.eojeols).enumerate() {
            if ge.surface != pe.surface {
                return Err(MetricsError::SurfaceMismatch {
                    sentence: i,
                    eojeol: e,
                    gold: ge.surface.clone(),
                    pred: pe.surface.clone(),
                });
            }
        }
        let g_items = segment_items(g);
        let p_items = segment_items(p);
        matched += g_items.intersection(&p_items).count();
        relevant += g_items.len();
        retrieved += p_items.len();
    }
    Ok(PrfReport::from_counts(matched, relevant, retrieved))
}

/// Exact-match POS accuracy over Level-1 eojeols.
///
/// `pred` is per-sentence merged output as produced by
/// [`crate::granularity::merge_to_level1`]; an eojeol is correct when its
/// full `form/TAG+form/TAG` analysis string equals the gold analysis.
pub fn pos_accuracy(
    gold: &[Sentence],
    pred: &[Vec<(String, String)>],
) -> Result<f64, MetricsError> {
    if gold.len() != pred.len() {
        return Err(MetricsError::SentenceCountMismatch {
            gold: gold.len(),
            pred: pred.len(),
        });
    }
    let (mut correct, mut total) = (0usize, 0usize);
    for (i, (g, p)) in gold.iter().zip(pred).enumerate() {
        if g.eojeols.len() != p.len() {
            return Err(MetricsError::EojeolCountMismatch {
                sentence: i,
                gold: g.eojeols.len(),
                pred: p.len(),
            });
        }
        for (ge, (_, analysis)) in g.eojeols.iter().zip(p) {
            if format_analysis(&ge.morphemes, false) == *analysis {
                correct += 1;
            }
            total += 1;
        }
    }
    if total == 0 {
        return Err(MetricsError::EmptyCorpus);
    }
    Ok(correct as f64 / total as f64)
}

/// Bracket-scoring switches; `Default` gives labeled scoring over all
/// phrase nodes including the root, functional tags kept.
#[derive(Debug, Clone, Copy)]
pub struct BracketConfig {
    pub labeled: bool,
    pub include_root: bool,
    pub strip_functional_tags: bool,
}

impl Default for BracketConfig {
    fn default() -> Self {
        BracketConfig {
            labeled: true,
            include_root: true,
            strip_functional_tags: false,
        }
    }
}

/// A bracket score plus the number of sentence pairs that could not be
/// scored because their leaf counts differ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketScore {
    pub report: PrfReport,
    pub skipped: usize,
}

fn constituents(tree: &SyntaxTree, config: &BracketConfig) -> Vec<(String, usize, usize)> {
    fn walk(
        node: &SyntaxTree,
        config: &BracketConfig,
        next_leaf: &mut usize,
        out: &mut Vec<(String, usize, usize)>,
    ) {
        match node {
            SyntaxTree::Phrase { label, children } => {
                let start = *next_leaf;
                for child in children {
                    walk(child, config, next_leaf, out);
                }
                let label = if !config.labeled {
                    String::new()
                } else if config.strip_functional_tags {
                    label.split(['-', '=']).next().unwrap_or(label).to_string()
                } else {
                    label.clone()
                };
                out.push((label, start, *next_leaf));
            }
            SyntaxTree::Preterminal { .. } | SyntaxTree::Leaf { .. } => *next_leaf += 1,
        }
    }
    let mut out = Vec::new();
    walk(tree, config, &mut 0, &mut out);
    // post-order puts the root constituent last
    if !config.include_root && matches!(tree, SyntaxTree::Phrase { .. }) {
        out.pop();
    }
    out
}

/// Labeled (or unlabeled) bracket precision/recall/f1 over phrase nodes.
///
/// Constituents are `(label, first leaf, past-last leaf)` triples counted as
/// a multiset; preterminals are not constituents. Sentence pairs with
/// differing leaf counts are excluded and counted in `skipped`. Callers
/// comparing trees converted to different levels should expand both sides
/// to level 5 first so leaf counts agree.
pub fn bracket_prf(
    gold: &[SyntaxTree],
    pred: &[SyntaxTree],
    config: &BracketConfig,
) -> Result<BracketScore, MetricsError> {
    if gold.len() != pred.len() {
        return Err(MetricsError::SentenceCountMismatch {
            gold: gold.len(),
            pred: pred.len(),
        });
    }
    let (mut matched, mut relevant, mut retrieved) = (0usize, 0usize, 0usize);
    let mut skipped = 0usize;
    for (g, p) in gold.iter().zip(pred) {
        if g.leaf_count() != p.leaf_count() {
            skipped += 1;
            continue;
        }
        let mut g_counts: HashMap<(String, usize, usize), usize> = HashMap::new();
        for item in constituents(g, config) {
            *g_counts.entry(item).or_insert(0) += 1;
        }
        for item in constituents(p, config) {
            retrieved += 1;
            if let Some(count) = g_counts.get_mut(&item) {
                if *count > 0 {
                    *count -= 1;
                    matched += 1;
                }
            }
        }
        relevant += constituents(g, config).len();
    }
    Ok(BracketScore {
        report: PrfReport::from_counts(matched, relevant, retrieved),
        skipped,
    })
}

/// Corpus-level BLEU in [0, 100]: clipped n-gram precisions up to 4-grams
/// pooled over all lines, uniform weights, multiplicative brevity penalty.
///
/// No smoothing, matching the reference implementation: if any pooled
/// precision is zero (short corpora often have no matching 4-grams) the
/// score is exactly 0.
pub fn bleu(references: &[Vec<String>], hypotheses: &[Vec<String>]) -> Result<f64, MetricsError> {
    if references.len() != hypotheses.len() {
        return Err(MetricsError::LineCountMismatch {
            references: references.len(),
            hypotheses: hypotheses.len(),
        });
    }
    if references.is_empty() {
        return Err(MetricsError::EmptyCorpus);
    }
    const MAX_N: usize = 4;
    let mut clipped = [0usize; MAX_N];
    let mut totals = [0usize; MAX_N];
    let (mut ref_len, mut hyp_len) = (0usize, 0usize);
    for (reference, hypothesis) in references.iter().zip(hypotheses) {
        ref_len += reference.len();
        hyp_len += hypothesis.len();
        for n in 1..=MAX_N {
            let mut ref_counts: HashMap<&[String], usize> = HashMap::new();
            for gram in reference.windows(n) {
                *ref_counts.entry(gram).or_insert(0) += 1;
            }
            let mut hyp_counts: HashMap<&[String], usize> = HashMap::new();
            for gram in hypothesis.windows(n) {
                *hyp_counts.entry(gram).or_insert(0) += 1;
            }
            for (gram, count) in hyp_counts {
                totals[n - 1] += count;
                clipped[n - 1] += count.min(ref_counts.get(gram).copied().unwrap_or(0));
            }
        }
    }
    let mut log_sum = 0.0f64;
    for n in 0..MAX_N {
        if clipped[n] == 0 || totals[n] == 0 {
            return Ok(0.0);
        }
        log_sum += (clipped[n] as f64 / totals[n] as f64).ln();
    }
    let brevity = if hyp_len < ref_len {
        (1.0 - ref_len as f64 / hyp_len as f64).exp()
    } else {
        1.0
    };
    Ok(100.0 * brevity * (log_sum / MAX_N as f64).exp())
}

/// One corpus-statistics row: token count, morphologically-complex-word
/// ratio, and the number of distinct immediate nonterminal labels
/// (composite tags) at `level`.
#[derive(Debug, Clone, PartialEq)]
pub struct StatsRow {
    pub level: Level,
    pub token_count: usize,
    pub mcw_ratio: f64,
    pub immediate_nt_count: usize,
}

/// Statistics of a corpus segmented at one level.
pub fn corpus_stats(corpus: &[Sentence], level: Level) -> Result<StatsRow, MetricsError> {
    corpus_stats_with(corpus, level, SymbolSplit::All)
}

/// Same, with an explicit symbol-splitting policy.
pub fn corpus_stats_with(
    corpus: &[Sentence],
    level: Level,
    symbols: SymbolSplit,
) -> Result<StatsRow, MetricsError> {
    if corpus.is_empty() {
        return Err(MetricsError::EmptyCorpus);
    }
    let mut token_count = 0usize;
    let mut complex = 0usize;
    let mut labels: BTreeSet<String> = BTreeSet::new();
    for sentence in corpus {
        for token in segment_sentence_with(sentence, level, symbols).tokens {
            token_count += 1;
            if token.morphemes.len() >= 2 {
                complex += 1;
            }
            labels.insert(token.composite_tag());
        }
    }
    if token_count == 0 {
        return Err(MetricsError::EmptyCorpus);
    }
    Ok(StatsRow {
        level,
        token_count,
        mcw_ratio: complex as f64 / token_count as f64,
        immediate_nt_count: labels.len(),
    })
}

/// Aligned plain-text table, one column per level.
pub fn stats_table(rows: &[StatsRow]) -> String {
    let labels = ["", "Tokens", "MCW", "NT"];
    let mut columns: Vec<[String; 4]> = vec![[
        labels[0].to_string(),
        labels[1].to_string(),
        labels[2].to_string(),
        labels[3].to_string(),
    ]];
    for row in rows {
        columns.push([
            row.level.to_string(),
            row.token_count.to_string(),
            format!("{:.4}", row.mcw_ratio),
            row.immediate_nt_count.to_string(),
        ]);
    }
    let widths: Vec<usize> = columns
        .iter()
        .map(|col| col.iter().map(|cell| cell.chars().count()).max().unwrap())
        .collect();
    let mut out = String::new();
    for line in 0..4 {
        for (c, col) in columns.iter().enumerate() {
            if c > 0 {
                out.push_str("  ");
            }
            let cell = &col[line];
            let pad = widths[c] - cell.chars().count();
            if c == 0 {
                // row labels align left, numbers align right
                out.push_str(cell);
                out.push_str(&" ".repeat(pad));
            } else {
                out.push_str(&" ".repeat(pad));
                out.push_str(cell);
            }
        }
        while out.ends_with(' ') {
            out.pop();
        }
        out.push('\n');
    }
    out
}

/// `key=value` lines, one line per level.
pub fn stats_machine(rows: &[StatsRow]) -> String {
    let mut out = String::new();
    for row in rows {
        let _ = writeln!(
            out,
            "level={} tokens={} mcw={:.4} nt={}",
            row.level.as_u8(),
            row.token_count,
            row.mcw_ratio,
            row.immediate_nt_count
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::granularity::{merge_to_level1, segment_corpus, segment_sentence};
    use crate::model::{EojeolAnalysis, Morpheme};
    use crate::tags::SejongTag::*;

    fn sentence(id: &str, eojeols: Vec<EojeolAnalysis>) -> Sentence {
        Sentence {
            id: id.into(),
            eojeols,
        }
    }

    fn verb_sentence() -> Sentence {
        sentence(
            "s1",
            vec![
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
        )
    }

    #[test]
    fn perfect_segmentation_scores_one() {
        let gold = segment_corpus(&[verb_sentence()], Level::L3);
        let report = segmentation_prf(&gold, &gold).unwrap();
        assert_eq!(
            (report.precision, report.recall, report.f1),
            (1.0, 1.0, 1.0)
        );
        assert_eq!(report.matched, report.relevant);
    }

    #[test]
    fn unsplit_eojeol_matches_nothing() {
        let s = sentence(
            "s1",
            vec![EojeolAnalysis::new(
                "웅가로가",
                vec![Morpheme::new("웅가로", NNP), Morpheme::new("가", JKS)],
            )],
        );
        let corpus = [s];
        let gold = segment_corpus(&corpus, Level::L3);
        let pred = segment_corpus(&corpus, Level::L1);
        let report = segmentation_prf(&gold, &pred).unwrap();
        assert_eq!((report.precision, report.recall), (0.0, 0.0));
        assert_eq!(report.f1, 0.0);
    }

    #[test]
    fn partial_split_scores_by_span_counts() {
        // gold a|b|c, pred a|bc over the same eojeol surface
        let gold_s = sentence(
            "s1",
            vec![EojeolAnalysis::new(
                "abc",
                vec![
                    Morpheme::new("a", NNG),
                    Morpheme::new("b", NNG),
                    Morpheme::new("c", NNG),
                ],
            )],
        );
        let pred_s = sentence(
            "s1",
            vec![EojeolAnalysis::new(
                "abc",
                vec![Morpheme::new("a", NNG), Morpheme::new("bc", NNG)],
            )],
        );
        let gold = segment_corpus(&[gold_s], Level::L5);
        let pred = segment_corpus(&[pred_s], Level::L5);
        let report = segmentation_prf(&gold, &pred).unwrap();
        assert_eq!(report.matched, 1);
        assert_eq!(report.precision, 0.5);
        assert!((report.recall - 1.0 / 3.0).abs() < 1e-12);
        assert!((report.f1 - 0.4).abs() < 1e-12);
    }

    #[test]
    fn misaligned_eojeols_cannot_be_scored() {
        let gold = segment_corpus(&[verb_sentence()], Level::L2);
        let one = sentence(
            "s1",
            vec![EojeolAnalysis::new(
                "웅가로가",
                vec![Morpheme::new("웅가로가", NNP)],
            )],
        );
        let pred = segment_corpus(&[one], Level::L2);
        assert_eq!(
            segmentation_prf(&gold, &pred),
            Err(MetricsError::EojeolCountMismatch {
                sentence: 0,
                gold: 2,
                pred: 1
            })
        );
    }

    #[test]
    fn pos_accuracy_counts_exact_eojeol_analyses() {
        let gold: Vec<Sentence> = (0..10)
            .map(|i| {
                sentence(
                    &format!("s{i}"),
                    vec![EojeolAnalysis::new(
                        "웅가로가",
                        vec![Morpheme::new("웅가로", NNP), Morpheme::new("가", JKS)],
                    )],
                )
            })
            .collect();
        let mut pred: Vec<Vec<(String, String)>> = gold
            .iter()
            .map(|s| segment_sentence(s, Level::L4))
            .map(|seg| merge_to_level1(&seg).unwrap())
            .collect();
        assert_eq!(pos_accuracy(&gold, &pred).unwrap(), 1.0);
        // one eojeol retagged JKS -> JKC
        pred[3][0].1 = "웅가로/NNP+가/JKC".to_string();
        assert_eq!(pos_accuracy(&gold, &pred).unwrap(), 0.9);
        assert!(pos_accuracy(&gold[..9], &pred).is_err());
    }

    fn leaf(form: &str) -> SyntaxTree {
        SyntaxTree::preterminal(crate::model::TokenGroup {
            eojeol_index: 0,
            morpheme_range: 0..1,
            rendered_form: form.into(),
            morphemes: vec![Morpheme::new(form, NNG)],
            analysis_complete: true,
        })
    }

    fn phrase(label: &str, children: Vec<SyntaxTree>) -> SyntaxTree {
        SyntaxTree::Phrase {
            label: label.into(),
            children,
        }
    }

    #[test]
    fn relabeled_span_costs_half_when_labeled() {
        let gold = [phrase("S", vec![phrase("A", vec![leaf("x"), leaf("y")])])];
        let pred = [phrase("S", vec![phrase("B", vec![leaf("x"), leaf("y")])])];
        let labeled = bracket_prf(&gold, &pred, &BracketConfig::default()).unwrap();
        assert_eq!(labeled.report.precision, 0.5);
        assert_eq!(labeled.report.recall, 0.5);
        assert_eq!(labeled.skipped, 0);
        let unlabeled = bracket_prf(
            &gold,
            &pred,
            &BracketConfig {
                labeled: false,
                ..BracketConfig::default()
            },
        )
        .unwrap();
        assert_eq!(unlabeled.report.f1, 1.0);
    }

    #[test]
    fn root_and_functional_tags_are_configurable() {
        let gold = [phrase(
            "S",
            vec![phrase("NP-SBJ", vec![leaf("x")]), leaf("y")],
        )];
        let pred = [phrase("S", vec![phrase("NP", vec![leaf("x")]), leaf("y")])];
        let strict = bracket_prf(&gold, &pred, &BracketConfig::default()).unwrap();
        assert_eq!(strict.report.matched, 1); // only S
        let stripped = bracket_prf(
            &gold,
            &pred,
            &BracketConfig {
                strip_functional_tags: true,
                ..BracketConfig::default()
            },
        )
        .unwrap();
        assert_eq!(stripped.report.f1, 1.0);
        let headless = bracket_prf(
            &gold,
            &pred,
            &BracketConfig {
                include_root: false,
                ..BracketConfig::default()
            },
        )
        .unwrap();
        assert_eq!(headless.report.matched, 0); // S removed, NP-SBJ vs NP left
    }

    #[test]
    fn leaf_count_mismatch_skips_the_pair() {
        let gold = phrase("S", vec![leaf("x"), leaf("y")]);
        let short = phrase("S", vec![leaf("x")]);
        let score = bracket_prf(
            &[gold.clone(), gold.clone()],
            &[short, gold],
            &BracketConfig::default(),
        )
        .unwrap();
        assert_eq!(score.skipped, 1);
        assert_eq!(score.report.f1, 1.0); // the surviving pair is identical
    }

    fn lines(text: &str) -> Vec<Vec<String>> {
        crate::corpus_io::read_tokens(text)
    }

    #[test]
    fn bleu_identity_and_disjoint_extremes() {
        let reference = lines("the cat sat on the mat .\n");
        assert!((bleu(&reference, &reference).unwrap() - 100.0).abs() < 1e-9);
        let disjoint = lines("e f g h\n");
        assert_eq!(bleu(&lines("a b c d\n"), &disjoint).unwrap(), 0.0);
        assert_eq!(
            bleu(&reference, &lines("")).unwrap_err(),
            MetricsError::LineCountMismatch {
                references: 1,
                hypotheses: 0
            }
        );
        assert_eq!(
            bleu(&lines(""), &lines("")).unwrap_err(),
            MetricsError::EmptyCorpus
        );
    }

    #[test]
    fn bleu_matches_the_frozen_regression_value() {
        // clipped counts 6/7, 4/6, 2/5, 1/4; both sides 7 tokens so BP = 1
        let reference = lines("the cat sat on a mat .\n");
        let hypothesis = lines("the cat sat on the mat .\n");
        let score = bleu(&reference, &hypothesis).unwrap();
        assert!((score - 48.8923022434901).abs() < 1e-6, "{score}");
    }

    #[test]
    fn bleu_brevity_penalty_applies_only_when_short() {
        let reference = lines("a b c d e f\n");
        let shorter = lines("a b c d e\n");
        let expected = 100.0 * (1.0f64 - 6.0 / 5.0).exp();
        assert!((bleu(&reference, &shorter).unwrap() - expected).abs() < 1e-9);
        // hypothesis longer than reference: no penalty, clipping costs p1
        let longer = lines("a b c d e f f\n");
        let p1: f64 = 6.0 / 7.0;
        let p2: f64 = 5.0 / 6.0;
        let p3: f64 = 4.0 / 5.0;
        let p4: f64 = 3.0 / 4.0;
        let expected =
            100.0 * (p1.ln() / 4.0 + p2.ln() / 4.0 + p3.ln() / 4.0 + p4.ln() / 4.0).exp();
        assert!((bleu(&reference, &longer).unwrap() - expected).abs() < 1e-9);
    }

    #[test]
    fn stats_count_tokens_complex_words_and_labels() {
        let corpus = [verb_sentence()];
        let l1 = corpus_stats(&corpus, Level::L1).unwrap();
        assert_eq!(l1.token_count, 2);
        assert_eq!(l1.mcw_ratio, 1.0);
        assert_eq!(l1.immediate_nt_count, 2); // NNP+JKS, VV+EP+EF+SF
        let l5 = corpus_stats(&corpus, Level::L5).unwrap();
        assert_eq!(l5.token_count, 6);
        assert_eq!(l5.mcw_ratio, 0.0);
        assert_eq!(l5.immediate_nt_count, 6);
        assert_eq!(corpus_stats(&[], Level::L1), Err(MetricsError::EmptyCorpus));
    }

    #[test]
    fn stats_render_as_table_and_machine_lines() {
        let corpus = [verb_sentence()];
        let rows: Vec<StatsRow> = Level::ALL
            .iter()
            .map(|&l| corpus_stats(&corpus, l).unwrap())
            .collect();
        let table = stats_table(&rows);
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[0].contains("Level 1") && lines[0].contains("Level 5"));
        assert!(lines[1].starts_with("Tokens"));
        assert!(lines[2].contains("0.0000"), "{table}");
        let machine = stats_machine(&rows);
        assert!(machine.lines().count() == 5);
        assert!(
            machine.starts_with("level=1 tokens=2 mcw=1.0000 nt=2\n"),
            "{machine}"
        );
    }
}
