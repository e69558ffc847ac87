//! Shared domain types: morphemes, eojeols, sentences, granularity levels,
//! segmented token streams, and constituency trees.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use crate::tags::{SejongTag, TagClass};

/// One morpheme: a canonical form with its Sejong tag and an optional
/// two-digit sense number (the `__NN` annotation of the sense-tagged corpus).
///
/// Forms never contain whitespace; `/` and `+` may occur in symbol forms and
/// are escaped on disk, never in memory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morpheme {
    pub form: String,
    pub tag: SejongTag,
    pub sense: Option<u8>,
}

impl Morpheme {
    pub fn new(form: impl Into<String>, tag: SejongTag) -> Self {
        let form = form.into();
        debug_assert!(!form.is_empty() && !form.chars().any(char::is_whitespace));
        Morpheme {
            form,
            tag,
            sense: None,
        }
    }

    pub fn with_sense(form: impl Into<String>, tag: SejongTag, sense: u8) -> Self {
        Morpheme {
            sense: Some(sense),
            ..Morpheme::new(form, tag)
        }
    }
}

/// One analysed eojeol: the surface string as written (symbols attached) and
/// its ordered morphemes. `record_id` preserves the per-line corpus id
/// (e.g. `BTAA0001-00000013`) so files re-serialize byte-identically; it is
/// ignored by every comparison and algorithm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EojeolAnalysis {
    pub surface: String,
    pub morphemes: Vec<Morpheme>,
    pub record_id: Option<String>,
}

impl EojeolAnalysis {
    pub fn new(surface: impl Into<String>, morphemes: Vec<Morpheme>) -> Self {
        let surface = surface.into();
        debug_assert!(!surface.is_empty() && !surface.chars().any(char::is_whitespace));
        debug_assert!(!morphemes.is_empty());
        EojeolAnalysis {
            surface,
            morphemes,
            record_id: None,
        }
    }

    /// `+`-joined tag mnemonics of all morphemes.
    pub fn composite_tag(&self) -> String {
        composite_tag_of(&self.morphemes)
    }
}

/// A sentence: ordered eojeols plus an opaque id (by convention the first
/// line's record id, or a synthesized one).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub id: String,
    pub eojeols: Vec<EojeolAnalysis>,
}

/// Surface text of the sentence: eojeols joined by single spaces.
impl Sentence {
    pub fn surface_text(&self) -> String {
        let parts: Vec<&str> = self.eojeols.iter().map(|e| e.surface.as_str()).collect();
        parts.join(" ")
    }
}

/// Segmentation granularity. The scale is a refinement cascade: each level
/// splits everything the previous level split, plus one more tag class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    /// Eojeols as written, symbols attached.
    L1,
    /// Symbols become their own tokens.
    L2,
    /// Case markers and particles also split off.
    L3,
    /// Verbal endings also split off.
    L4,
    /// Every morpheme is its own token.
    L5,
}

impl Level {
    pub const ALL: [Level; 5] = [Level::L1, Level::L2, Level::L3, Level::L4, Level::L5];

    pub fn as_u8(self) -> u8 {
        match self {
            Level::L1 => 1,
            Level::L2 => 2,
            Level::L3 => 3,
            Level::L4 => 4,
            Level::L5 => 5,
        }
    }

    pub fn from_u8(n: u8) -> Option<Level> {
        match n {
            1 => Some(Level::L1),
            2 => Some(Level::L2),
            3 => Some(Level::L3),
            4 => Some(Level::L4),
            5 => Some(Level::L5),
            _ => None,
        }
    }

    /// Does this level split morphemes of `class` into singleton tokens?
    pub fn splits(self, class: TagClass) -> bool {
        match self {
            Level::L1 => false,
            Level::L2 => class == TagClass::Symbol,
            Level::L3 => matches!(class, TagClass::Symbol | TagClass::CaseMarker),
            Level::L4 => class != TagClass::Lexical,
            Level::L5 => true,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Level {}", self.as_u8())
    }
}

impl FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse::<u8>()
            .ok()
            .and_then(Level::from_u8)
            .ok_or_else(|| format!("granularity level must be 1-5, got {s:?}"))
    }
}

/// One token of a segmented sentence: a contiguous morpheme group of one
/// eojeol, with the surface-recovered form it renders as.
///
/// `morphemes` is the owned slice of the source eojeol's morphemes covered by
/// `morpheme_range`, so trees and token streams stay self-contained.
/// `analysis_complete` is false only for tokens reconstructed from bare
/// `(TAG form)` preterminals, where a composite tag gives the part-of-speech
/// split but the per-morpheme forms are unknown.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenGroup {
    pub eojeol_index: usize,
    pub morpheme_range: Range<usize>,
    pub rendered_form: String,
    pub morphemes: Vec<Morpheme>,
    pub analysis_complete: bool,
}

impl TokenGroup {
    pub fn composite_tag(&self) -> String {
        composite_tag_of(&self.morphemes)
    }

    /// A token is symbol-class when every morpheme in it is a symbol. At
    /// Level 2+ symbol tokens are always singletons.
    pub fn is_symbol(&self) -> bool {
        self.morphemes
            .iter()
            .all(|m| m.tag.class() == TagClass::Symbol)
    }
}

/// `+`-joined tag mnemonics.
pub fn composite_tag_of(morphemes: &[Morpheme]) -> String {
    let parts: Vec<&str> = morphemes.iter().map(|m| m.tag.as_str()).collect();
    parts.join("+")
}

/// Parse a `+`-joined composite tag such as `NNG+XSN+VCP`.
pub fn parse_composite_tag(s: &str) -> Result<Vec<SejongTag>, crate::tags::UnknownTag> {
    s.split('+').map(str::parse).collect()
}

/// A sentence segmented at one granularity level. Tokens keep full provenance
/// into `source`, so merging back to eojeols is lossless.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentedSentence {
    pub level: Level,
    pub tokens: Vec<TokenGroup>,
    pub source: Sentence,
}

/// A constituency tree.
///
/// `Leaf` is an eojeol exactly as a source treebank stores it: one token
/// covering the whole eojeol, serialized as its analysis string
/// (`웅가로/NNP+가/JKS`). `Preterminal` is a granularity token under its
/// composite-tag label, the shape level conversion produces, serialized as
/// `(NNP+JKS 웅가로가)`. They are distinct node kinds rather than a label
/// convention because phrase labels and tag mnemonics overlap (NP is both),
/// which would make the two serializations ambiguous.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SyntaxTree {
    Phrase {
        label: String,
        children: Vec<SyntaxTree>,
    },
    Preterminal {
        token: TokenGroup,
    },
    Leaf {
        token: TokenGroup,
    },
}

impl SyntaxTree {
    pub fn phrase(label: impl Into<String>, children: Vec<SyntaxTree>) -> Self {
        SyntaxTree::Phrase {
            label: label.into(),
            children,
        }
    }

    pub fn preterminal(token: TokenGroup) -> Self {
        SyntaxTree::Preterminal { token }
    }

    pub fn is_preterminal(&self) -> bool {
        matches!(self, SyntaxTree::Preterminal { .. })
    }

    pub fn preterminal_token(&self) -> Option<&TokenGroup> {
        match self {
            SyntaxTree::Preterminal { token } => Some(token),
            _ => None,
        }
    }

    /// All terminal tokens (leaves and preterminal tokens), left to right.
    pub fn leaves(&self) -> Vec<&TokenGroup> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a TokenGroup>) {
        match self {
            SyntaxTree::Leaf { token } | SyntaxTree::Preterminal { token } => out.push(token),
            SyntaxTree::Phrase { children, .. } => {
                for child in children {
                    child.collect_leaves(out);
                }
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            SyntaxTree::Leaf { .. } | SyntaxTree::Preterminal { .. } => 1,
            SyntaxTree::Phrase { children, .. } => {
                children.iter().map(SyntaxTree::leaf_count).sum()
            }
        }
    }
}
