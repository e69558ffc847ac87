//! The Sejong morphological tagset and its split-class taxonomy.
//!
//! The tagset is closed: 45 tags. Segmentation granularity is driven by a
//! total partition of the tagset into four classes — symbols, case markers
//! (which here include auxiliary and conjunctive particles), verbal endings,
//! and everything else ("lexical"). Copulas (VCP/VCN) and affixes (XPN/XS*)
//! are lexical on purpose: they never split before Level 5.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Error for a tag outside the closed Sejong tagset.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown Sejong tag: {0:?}")]
pub struct UnknownTag(pub String);

macro_rules! sejong_tags {
    ($($name:ident),+ $(,)?) => {
        /// One of the 45 Sejong part-of-speech tags.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        #[allow(clippy::upper_case_acronyms)]
        pub enum SejongTag {
            $($name),+
        }

        impl SejongTag {
            /// Every tag, in canonical listing order.
            pub const ALL: &'static [SejongTag] = &[$(SejongTag::$name),+];

            /// Tag mnemonic as written in corpora (e.g. "NNG").
            pub fn as_str(self) -> &'static str {
                match self {
                    $(SejongTag::$name => stringify!($name)),+
                }
            }
        }

        impl FromStr for SejongTag {
            type Err = UnknownTag;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $(stringify!($name) => Ok(SejongTag::$name),)+
                    other => Err(UnknownTag(other.to_string())),
                }
            }
        }
    };
}

sejong_tags! {
    // nouns, pronouns, numerals
    NNG, NNP, NNB, NP, NR,
    // predicates: verbs, adjectives, auxiliaries, copulas
    VV, VA, VX, VCP, VCN,
    // modifiers and interjections
    MM, MAG, MAJ, IC,
    // case markers and particles
    JKS, JKC, JKG, JKO, JKB, JKV, JKQ, JX, JC,
    // verbal endings
    EP, EF, EC, ETN, ETM,
    // affixes and roots
    XPN, XSN, XSV, XSA, XR,
    // symbols
    SF, SP, SS, SE, SO, SW,
    // foreign, hanja, numbers
    SL, SH, SN,
    // unanalyzable
    NF, NV, NA,
}

impl fmt::Display for SejongTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Split class of a tag. Levels 2-4 peel these classes off one at a time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TagClass {
    /// Punctuation and other symbols: SF SP SS SE SO SW.
    Symbol,
    /// Case markers and particles: JKS JKC JKG JKO JKB JKV JKQ JX JC.
    CaseMarker,
    /// Verbal endings: EP EF EC ETN ETM.
    VerbalEnding,
    /// Everything else, including copulas and affixes.
    Lexical,
}

impl SejongTag {
    /// Split class used by the granularity cascade.
    pub fn class(self) -> TagClass {
        use SejongTag::*;
        match self {
            SF | SP | SS | SE | SO | SW => TagClass::Symbol,
            JKS | JKC | JKG | JKO | JKB | JKV | JKQ | JX | JC => TagClass::CaseMarker,
            EP | EF | EC | ETN | ETM => TagClass::VerbalEnding,
            _ => TagClass::Lexical,
        }
    }
}
