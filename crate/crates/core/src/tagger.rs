//! Dictionary-plus-HMM morphological tagger, parameterized by level.
//!
//! Training counts token transitions and emissions over a corpus segmented
//! at one granularity level, keeps the most frequent full analysis of every
//! eojeol surface, and tabulates final-syllable tag preferences for unknown
//! forms. Decoding is first-order Viterbi in log space; analysis of raw text
//! is dictionary lookup plus trailing-symbol stripping, with no sub-eojeol
//! lattice search. Models serialize as versioned text holding raw counts,
//! so identical corpora produce identical model bytes.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::corpus_io::{format_analysis, parse_analysis, FormatError};
use crate::granularity::{merge_to_level1, segment_corpus, segment_sentence};
use crate::metrics::{pos_accuracy, segmentation_prf, MetricsError, PrfReport};
use crate::model::{
    parse_composite_tag, EojeolAnalysis, Level, Morpheme, SegmentedSentence, Sentence,
};
use crate::tags::SejongTag;

/// Synthetic sentence-initial conditioning tag.
pub const BOS: &str = "BOS";
/// Synthetic sentence-final transition target.
pub const EOS: &str = "EOS";

const MODEL_HEADER: &str = "kseg-tagger v1";

#[derive(Debug, Error, PartialEq, Eq)]
#[error("empty training corpus")]
pub struct EmptyTrainingCorpus;

#[derive(Debug, Clone, PartialEq)]
struct DictEntry {
    morphemes: Vec<Morpheme>,
    count: usize,
}

/// A trained tagging model. All distributions are stored as raw counts;
/// smoothed probabilities are derived at query time over closed domains
/// (observed composite tags, observed forms), so every conditional
/// distribution sums to one.
#[derive(Debug, Clone, PartialEq)]
pub struct TaggerModel {
    pub level: Level,
    pub smoothing_k: f64,
    dictionary: BTreeMap<String, DictEntry>,
    /// prev tag (or BOS) -> next tag (or EOS) -> count
    transitions: BTreeMap<String, BTreeMap<String, usize>>,
    /// composite tag -> written form -> count
    emissions: BTreeMap<String, BTreeMap<String, usize>>,
    /// final syllable of a form -> composite tag -> count
    suffix: BTreeMap<String, BTreeMap<String, usize>>,
    /// every form observed in training, the closed emission domain
    vocabulary: BTreeSet<String>,
}

/// Count a model over `corpus` segmented at `level`. Deterministic given
/// corpus order; dictionary ties break toward the first-seen analysis.
pub fn train(
    corpus: &[Sentence],
    level: Level,
    smoothing_k: f64,
) -> Result<TaggerModel, EmptyTrainingCorpus> {
    if corpus.is_empty() {
        return Err(EmptyTrainingCorpus);
    }
    // candidate analyses per surface, with counts and first-seen order
    let mut candidates: BTreeMap<String, Vec<(Vec<Morpheme>, usize, usize)>> = BTreeMap::new();
    let mut transitions: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
    let mut emissions: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
    let mut suffix: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
    let mut seen = 0usize;
    for sentence in corpus {
        for eojeol in &sentence.eojeols {
            let entries = candidates.entry(eojeol.surface.clone()).or_default();
            match entries.iter_mut().find(|(m, _, _)| *m == eojeol.morphemes) {
                Some((_, count, _)) => *count += 1,
                None => entries.push((eojeol.morphemes.clone(), 1, seen)),
            }
            seen += 1;
        }
        let segmented = segment_sentence(sentence, level);
        let mut prev = BOS.to_string();
        for token in &segmented.tokens {
            let tag = token.composite_tag();
            *transitions
                .entry(prev)
                .or_default()
                .entry(tag.clone())
                .or_insert(0) += 1;
            *emissions
                .entry(tag.clone())
                .or_default()
                .entry(token.rendered_form.clone())
                .or_insert(0) += 1;
            if let Some(last) = token.rendered_form.chars().last() {
                *suffix
                    .entry(last.to_string())
                    .or_default()
                    .entry(tag.clone())
                    .or_insert(0) += 1;
            }
            prev = tag;
        }
        *transitions
            .entry(prev)
            .or_default()
            .entry(EOS.to_string())
            .or_insert(0) += 1;
    }
    let dictionary = candidates
        .into_iter()
        .map(|(surface, entries)| {
            let (morphemes, count, _) = entries
                .into_iter()
                .max_by(|(_, c1, s1), (_, c2, s2)| c1.cmp(c2).then(s2.cmp(s1)))
                .expect("every surface has at least one analysis");
            (surface, DictEntry { morphemes, count })
        })
        .collect();
    let vocabulary = emissions
        .values()
        .flat_map(|row| row.keys().cloned())
        .collect::<BTreeSet<_>>();
    Ok(TaggerModel {
        level,
        smoothing_k,
        dictionary,
        transitions,
        emissions,
        suffix,
        vocabulary,
    })
}

impl TaggerModel {
    /// Observed composite tags, sorted; the decoding domain.
    pub fn tags(&self) -> impl Iterator<Item = &str> {
        self.emissions.keys().map(String::as_str)
    }

    pub fn tag_set_size(&self) -> usize {
        self.emissions.len()
    }

    pub fn vocabulary_size(&self) -> usize {
        self.vocabulary.len()
    }

    pub fn dictionary_len(&self) -> usize {
        self.dictionary.len()
    }

    /// The stored analysis an in-dictionary surface segments from.
    pub fn dictionary_analysis(&self, surface: &str) -> Option<&[Morpheme]> {
        self.dictionary
            .get(surface)
            .map(|entry| entry.morphemes.as_slice())
    }

    /// Smoothed log P(next | prev) over the closed domain of observed tags
    /// plus EOS.
    pub fn transition_log_prob(&self, prev: &str, next: &str) -> f64 {
        let row = self.transitions.get(prev);
        let count = row.and_then(|r| r.get(next)).copied().unwrap_or(0);
        let total: usize = row.map(|r| r.values().sum()).unwrap_or(0);
        let domain = self.emissions.len() + 1;
        ((count as f64 + self.smoothing_k) / (total as f64 + self.smoothing_k * domain as f64)).ln()
    }

    /// Smoothed log P(form | tag) for known forms; unknown forms score by
    /// the final-syllable tag table, or uniformly when the syllable is also
    /// unseen.
    pub fn emission_log_prob(&self, tag: &str, form: &str) -> f64 {
        if self.vocabulary.contains(form) {
            let row = self.emissions.get(tag);
            let count = row.and_then(|r| r.get(form)).copied().unwrap_or(0);
            let total: usize = row.map(|r| r.values().sum()).unwrap_or(0);
            let domain = self.vocabulary.len();
            return ((count as f64 + self.smoothing_k)
                / (total as f64 + self.smoothing_k * domain as f64))
                .ln();
        }
        let tag_count = self.emissions.len() as f64;
        let last = form.chars().last().map(|c| c.to_string());
        match last.as_deref().and_then(|l| self.suffix.get(l)) {
            Some(row) => {
                let count = row.get(tag).copied().unwrap_or(0);
                let total: usize = row.values().sum();
                ((count as f64 + self.smoothing_k) / (total as f64 + self.smoothing_k * tag_count))
                    .ln()
            }
            None => (1.0 / tag_count).ln(),
        }
    }

    /// Most likely composite tag sequence for `forms`. Ties prefer the
    /// candidate considered first, i.e. the lexicographically smaller tag,
    /// at every decision point.
    pub fn viterbi(&self, forms: &[String]) -> Vec<String> {
        let tags: Vec<&String> = self.emissions.keys().collect();
        if forms.is_empty() || tags.is_empty() {
            return Vec::new();
        }
        let width = tags.len();
        let mut score: Vec<f64> = tags
            .iter()
            .map(|tag| self.transition_log_prob(BOS, tag) + self.emission_log_prob(tag, &forms[0]))
            .collect();
        let mut back: Vec<Vec<usize>> = Vec::with_capacity(forms.len());
        back.push(vec![0; width]);
        for form in &forms[1..] {
            let mut next_score = vec![f64::NEG_INFINITY; width];
            let mut pointers = vec![0usize; width];
            for (j, tag) in tags.iter().enumerate() {
                let emit = self.emission_log_prob(tag, form);
                let mut best = f64::NEG_INFINITY;
                let mut arg = 0usize;
                for (p, prev) in tags.iter().enumerate() {
                    let candidate = score[p] + self.transition_log_prob(prev, tag);
                    if candidate > best {
                        best = candidate;
                        arg = p;
                    }
                }
                next_score[j] = best + emit;
                pointers[j] = arg;
            }
            score = next_score;
            back.push(pointers);
        }
        let mut best = f64::NEG_INFINITY;
        let mut arg = 0usize;
        for (j, tag) in tags.iter().enumerate() {
            let candidate = score[j] + self.transition_log_prob(tag, EOS);
            if candidate > best {
                best = candidate;
                arg = j;
            }
        }
        let mut sequence = vec![0usize; forms.len()];
        sequence[forms.len() - 1] = arg;
        for i in (1..forms.len()).rev() {
            sequence[i - 1] = back[i][sequence[i]];
        }
        sequence.into_iter().map(|j| tags[j].clone()).collect()
    }

    /// Analyze whitespace-split raw text: dictionary lookup per eojeol,
    /// trailing-symbol stripping for unknown eojeols at level 2 and finer,
    /// then Viterbi retagging of the whole token stream. The returned
    /// sentence's id is empty; callers assign one.
    pub fn analyze(&self, raw: &str) -> SegmentedSentence {
        let eojeols: Vec<EojeolAnalysis> = raw
            .split_whitespace()
            .map(|surface| {
                let morphemes = match self.dictionary.get(surface) {
                    Some(entry) => entry.morphemes.clone(),
                    None => oov_morphemes(surface, self.level),
                };
                EojeolAnalysis {
                    surface: surface.to_string(),
                    morphemes,
                    record_id: None,
                }
            })
            .collect();
        let provisional = Sentence {
            id: String::new(),
            eojeols,
        };
        let mut segmented = segment_sentence(&provisional, self.level);
        let forms: Vec<String> = segmented
            .tokens
            .iter()
            .map(|t| t.rendered_form.clone())
            .collect();
        if !forms.is_empty() {
            let decoded = self.viterbi(&forms);
            retag(&mut segmented, &decoded);
        }
        segmented
    }
}

/// Provisional analysis for an out-of-dictionary eojeol: trailing symbol
/// characters split off one by one (level 2+), the remainder one morpheme.
/// Placeholder tags only steer the symbol split; Viterbi replaces them.
fn oov_morphemes(surface: &str, level: Level) -> Vec<Morpheme> {
    let chars: Vec<char> = surface.chars().collect();
    let mut split = chars.len();
    if level >= Level::L2 {
        while split > 1 && !chars[split - 1].is_alphanumeric() {
            split -= 1;
        }
    }
    let mut morphemes = vec![Morpheme::new(
        chars[..split].iter().collect::<String>(),
        SejongTag::NNG,
    )];
    for &c in &chars[split..] {
        morphemes.push(Morpheme::new(c.to_string(), SejongTag::SW));
    }
    morphemes
}

/// Replace every token's tags with the decoded composite tags, rebuilding
/// the backing sentence so tokens still tile their eojeols. A decoded tag
/// whose arity matches the token keeps the token's morpheme forms; on
/// arity mismatch the token collapses to one morpheme spelled as written.
fn retag(segmented: &mut SegmentedSentence, decoded: &[String]) {
    if decoded.len() != segmented.tokens.len() {
        return; // degenerate model with no tag domain
    }
    let mut eojeols: Vec<EojeolAnalysis> = segmented
        .source
        .eojeols
        .iter()
        .map(|e| EojeolAnalysis {
            surface: e.surface.clone(),
            morphemes: Vec::new(),
            record_id: e.record_id.clone(),
        })
        .collect();
    let mut cursors = vec![0usize; eojeols.len()];
    for (token, tag_string) in segmented.tokens.iter_mut().zip(decoded) {
        let tags = parse_composite_tag(tag_string)
            .expect("decoded tags come from the model's observed tag set");
        let morphemes: Vec<Morpheme> = if tags.len() == token.morphemes.len() {
            token
                .morphemes
                .iter()
                .zip(tags)
                .map(|(m, tag)| Morpheme {
                    form: m.form.clone(),
                    tag,
                    sense: if tag == m.tag { m.sense } else { None },
                })
                .collect()
        } else {
            vec![Morpheme::new(token.rendered_form.clone(), tags[0])]
        };
        let eojeol = token.eojeol_index;
        let start = cursors[eojeol];
        cursors[eojeol] = start + morphemes.len();
        token.morpheme_range = start..cursors[eojeol];
        token.morphemes = morphemes.clone();
        eojeols[eojeol].morphemes.extend(morphemes);
    }
    segmented.source.eojeols = eojeols;
}

/// Segmentation f1 and Level-1 POS accuracy of a model on held-out data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineReport {
    pub level: Level,
    pub segmentation: PrfReport,
    pub pos_accuracy: f64,
}

/// Run the full loop on held-out text: segmentation is scored from
/// `analyze` on the raw sentences against the gold segmentation; tagging is
/// scored by Viterbi-retagging the gold token stream, merging back to
/// Level 1, and exact-matching eojeol analyses.
pub fn evaluate_pipeline(
    model: &TaggerModel,
    raw: &[String],
    gold: &[Sentence],
) -> Result<PipelineReport, MetricsError> {
    if gold.is_empty() {
        return Err(MetricsError::EmptyCorpus);
    }
    if raw.len() != gold.len() {
        return Err(MetricsError::SentenceCountMismatch {
            gold: gold.len(),
            pred: raw.len(),
        });
    }
    let gold_seg = segment_corpus(gold, model.level);
    let pred_seg: Vec<SegmentedSentence> = raw
        .iter()
        .zip(gold)
        .map(|(text, g)| {
            let mut analyzed = model.analyze(text);
            analyzed.source.id = g.id.clone();
            analyzed
        })
        .collect();
    let segmentation = segmentation_prf(&gold_seg, &pred_seg)?;
    let mut merged = Vec::with_capacity(gold.len());
    for gseg in &gold_seg {
        let mut retagged = gseg.clone();
        let forms: Vec<String> = retagged
            .tokens
            .iter()
            .map(|t| t.rendered_form.clone())
            .collect();
        if !forms.is_empty() {
            let decoded = model.viterbi(&forms);
            retag(&mut retagged, &decoded);
        }
        merged.push(merge_to_level1(&retagged).expect("retagged tokens tile their eojeols"));
    }
    let accuracy = pos_accuracy(gold, &merged)?;
    Ok(PipelineReport {
        level: model.level,
        segmentation,
        pos_accuracy: accuracy,
    })
}

impl TaggerModel {
    /// Serialize as versioned, line-oriented text holding raw counts.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(MODEL_HEADER);
        out.push('\n');
        out.push_str(&format!("level {}\n", self.level.as_u8()));
        out.push_str(&format!("smoothing_k {}\n", self.smoothing_k));
        out.push_str("\n[dictionary]\n");
        for (surface, entry) in &self.dictionary {
            out.push_str(&format!(
                "{surface}\t{}\t{}\n",
                entry.count,
                format_analysis(&entry.morphemes, true)
            ));
        }
        out.push_str("\n[transitions]\n");
        for (prev, row) in &self.transitions {
            for (next, count) in row {
                out.push_str(&format!("{prev}\t{next}\t{count}\n"));
            }
        }
        out.push_str("\n[emissions]\n");
        for (tag, row) in &self.emissions {
            for (form, count) in row {
                out.push_str(&format!("{tag}\t{form}\t{count}\n"));
            }
        }
        out.push_str("\n[suffix]\n");
        for (syllable, row) in &self.suffix {
            for (tag, count) in row {
                out.push_str(&format!("{syllable}\t{tag}\t{count}\n"));
            }
        }
        out
    }

    /// Parse a model serialized by [`TaggerModel::to_text`].
    pub fn from_text(text: &str) -> Result<TaggerModel, FormatError> {
        fn fields<const N: usize>(lineno: usize, line: &str) -> Result<[&str; N], FormatError> {
            let cols: Vec<&str> = line.split('\t').collect();
            cols.try_into()
                .map_err(|_| FormatError::new(lineno, format!("expected {N} tab-separated fields")))
        }
        fn tag_key(lineno: usize, s: &str, synthetic: &str) -> Result<String, FormatError> {
            if s == synthetic {
                return Ok(s.to_string());
            }
            parse_composite_tag(s)
                .map(|_| s.to_string())
                .map_err(|e| FormatError::new(lineno, e.to_string()))
        }

        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let header = lines
            .next()
            .ok_or_else(|| FormatError::new(1, "empty model file"))?;
        if header.1 != MODEL_HEADER {
            return Err(FormatError::new(
                1,
                format!("expected {MODEL_HEADER:?} header"),
            ));
        }
        let (lineno, line) = lines
            .next()
            .ok_or_else(|| FormatError::new(2, "missing level line"))?;
        let level: Level = line
            .strip_prefix("level ")
            .ok_or_else(|| FormatError::new(lineno, "expected 'level N'"))?
            .parse()
            .map_err(|e| FormatError::new(lineno, e))?;
        let (lineno, line) = lines
            .next()
            .ok_or_else(|| FormatError::new(3, "missing smoothing_k line"))?;
        let smoothing_k: f64 = line
            .strip_prefix("smoothing_k ")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| FormatError::new(lineno, "expected 'smoothing_k <number>'"))?;

        let mut dictionary = BTreeMap::new();
        let mut transitions: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
        let mut emissions: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
        let mut suffix: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
        let mut section: Option<&str> = None;
        for (lineno, line) in lines {
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = Some(match name {
                    "dictionary" => "dictionary",
                    "transitions" => "transitions",
                    "emissions" => "emissions",
                    "suffix" => "suffix",
                    _ => {
                        return Err(FormatError::new(
                            lineno,
                            format!("unknown section {name:?}"),
                        ))
                    }
                });
                continue;
            }
            let count_of = |s: &str| -> Result<usize, FormatError> {
                s.parse()
                    .map_err(|_| FormatError::new(lineno, format!("bad count {s:?}")))
            };
            match section {
                Some("dictionary") => {
                    let [surface, count, analysis] = fields::<3>(lineno, line)?;
                    let morphemes = parse_analysis(analysis, lineno)?;
                    dictionary.insert(
                        surface.to_string(),
                        DictEntry {
                            morphemes,
                            count: count_of(count)?,
                        },
                    );
                }
                Some("transitions") => {
                    let [prev, next, count] = fields::<3>(lineno, line)?;
                    let prev = tag_key(lineno, prev, BOS)?;
                    let next = tag_key(lineno, next, EOS)?;
                    *transitions
                        .entry(prev)
                        .or_default()
                        .entry(next)
                        .or_insert(0) += count_of(count)?;
                }
                Some("emissions") => {
                    let [tag, form, count] = fields::<3>(lineno, line)?;
                    let tag = tag_key(lineno, tag, "")?;
                    *emissions
                        .entry(tag)
                        .or_default()
                        .entry(form.to_string())
                        .or_insert(0) += count_of(count)?;
                }
                Some("suffix") => {
                    let [syllable, tag, count] = fields::<3>(lineno, line)?;
                    let tag = tag_key(lineno, tag, "")?;
                    *suffix
                        .entry(syllable.to_string())
                        .or_default()
                        .entry(tag)
                        .or_insert(0) += count_of(count)?;
                }
                _ => return Err(FormatError::new(lineno, "data before any [section] header")),
            }
        }
        let vocabulary = emissions
            .values()
            .flat_map(|row| row.keys().cloned())
            .collect::<BTreeSet<_>>();
        Ok(TaggerModel {
            level,
            smoothing_k,
            dictionary,
            transitions,
            emissions,
            suffix,
            vocabulary,
        })
    }
}
