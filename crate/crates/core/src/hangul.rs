//! Hangul syllable arithmetic.
//!
//! Precomposed syllables occupy U+AC00..=U+D7A3 and decompose algorithmically
//! into (lead consonant, vowel, optional tail consonant). Surface recovery
//! needs exactly two things from this block: stripping a tail consonant off a
//! syllable (세계적인 → 세계적이 + ㄴ) and recognizing which compatibility
//! jamo a tail corresponds to.

/// First precomposed syllable, 가.
pub const SYLLABLE_BASE: u32 = 0xAC00;
/// Number of lead consonants.
pub const LEAD_COUNT: u32 = 19;
/// Number of vowels.
pub const VOWEL_COUNT: u32 = 21;
/// Number of tail slots, including the empty tail at index 0.
pub const TAIL_COUNT: u32 = 28;
/// Syllables per lead consonant: VOWEL_COUNT * TAIL_COUNT.
pub const PER_LEAD: u32 = VOWEL_COUNT * TAIL_COUNT;
/// Total precomposed syllables: 11,172.
pub const SYLLABLE_COUNT: u32 = LEAD_COUNT * PER_LEAD;

/// A decomposed syllable: indices into the lead/vowel/tail tables.
/// `tail == 0` means the syllable has no final consonant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Syllable {
    pub lead: u32,
    pub vowel: u32,
    pub tail: u32,
}

/// Decompose a precomposed Hangul syllable. Returns `None` for anything
/// outside U+AC00..=U+D7A3.
pub fn decompose(ch: char) -> Option<Syllable> {
    let offset = (ch as u32).checked_sub(SYLLABLE_BASE)?;
    if offset >= SYLLABLE_COUNT {
        return None;
    }
    Some(Syllable {
        lead: offset / PER_LEAD,
        vowel: (offset % PER_LEAD) / TAIL_COUNT,
        tail: offset % TAIL_COUNT,
    })
}

/// Compose a syllable from table indices. Returns `None` when an index is out
/// of range.
pub fn compose(s: Syllable) -> Option<char> {
    if s.lead >= LEAD_COUNT || s.vowel >= VOWEL_COUNT || s.tail >= TAIL_COUNT {
        return None;
    }
    char::from_u32(SYLLABLE_BASE + s.lead * PER_LEAD + s.vowel * TAIL_COUNT + s.tail)
}

/// Compatibility jamo that appear as standalone morpheme forms in the Sejong
/// corpus (ㄴ/ETM, ㄹ/ETM, ㅁ/ETN, ㅂ in -습니다 endings), with their tail
/// index in the syllable block.
const LONE_JAMO_TAILS: [(char, u32); 4] = [
    ('\u{3134}', 4),  // ㄴ
    ('\u{3139}', 8),  // ㄹ
    ('\u{3141}', 16), // ㅁ
    ('\u{3142}', 17), // ㅂ
];

/// Tail index of a lone compatibility jamo, if it is one of the four ending
/// jamo that fuse into a host syllable.
pub fn lone_jamo_tail_index(ch: char) -> Option<u32> {
    LONE_JAMO_TAILS
        .iter()
        .find(|(jamo, _)| *jamo == ch)
        .map(|&(_, idx)| idx)
}

/// True if `ch` is ㄴ, ㄹ, ㅁ, or ㅂ as a standalone compatibility jamo.
pub fn is_lone_ending_jamo(ch: char) -> bool {
    lone_jamo_tail_index(ch).is_some()
}

/// If `host` is a precomposed syllable whose tail equals `jamo`'s tail index,
/// return the syllable with the tail removed (e.g. 인 with ㄴ → 이).
pub fn strip_tail(host: char, jamo: char) -> Option<char> {
    let idx = lone_jamo_tail_index(jamo)?;
    let s = decompose(host)?;
    if s.tail != idx {
        return None;
    }
    compose(Syllable { tail: 0, ..s })
}

/// Inverse of [`strip_tail`]: if `host` is a tail-less syllable, compose
/// `jamo` into its tail slot (이 with ㄴ → 인). `None` when `host` already
/// has a tail or `jamo` is not one of the four ending jamo.
pub fn attach_tail(host: char, jamo: char) -> Option<char> {
    let idx = lone_jamo_tail_index(jamo)?;
    let s = decompose(host)?;
    if s.tail != 0 {
        return None;
    }
    compose(Syllable { tail: idx, ..s })
}
