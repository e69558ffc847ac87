//! Deterministic generation of analyzed Korean corpora for tests and
//! benchmarks.
//!
//! Sentences are assembled from small word banks with phonologically
//! plausible allomorph selection (이/가, 을/를, 은/는, 로/으로, ㄴ/은,
//! ㅂ니다/습니다, 았/었/였 by vowel harmony) and real surface fusion:
//! lone ending jamo attach to the preceding syllable's empty tail slot and
//! a fixed table of stem+았/었 contractions (나서+었 = 나섰) applies, so
//! generated eojeols behave like corpus ones under rendering and fallback.
//! Everything is driven by a seeded ChaCha stream: one seed, one corpus.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hangul::{attach_tail, decompose};
use crate::model::{EojeolAnalysis, Morpheme, Sentence, SyntaxTree, TokenGroup};
use crate::tags::SejongTag;
use crate::tags::SejongTag::*;

const NOUNS: [&str; 24] = [
    "세계",
    "의상",
    "직물",
    "디자이너",
    "실내",
    "장식",
    "모자",
    "사람",
    "시간",
    "문제",
    "사회",
    "경제",
    "역사",
    "문화",
    "음악",
    "영화",
    "도시",
    "학교",
    "학생",
    "나라",
    "물건",
    "가격",
    "시장",
    "회사",
];
const PROPER: [&str; 8] = [
    "웅가로",
    "프랑스",
    "엠마누엘",
    "한국",
    "서울",
    "파리",
    "김철수",
    "이영희",
];
const PRONOUNS: [&str; 3] = ["그", "우리", "누구"];
const VERBS: [&str; 12] = [
    "가", "오", "보", "주", "되", "하", "나서", "먹", "읽", "만들", "받", "찾",
];
const ADJECTIVES: [&str; 4] = ["크", "작", "좋", "많"];
const ADVERBS: [&str; 4] = ["매우", "가장", "다시", "함께"];
const DETERMINERS: [&str; 3] = ["새", "온갖", "여러"];
const COUNTERS: [&str; 3] = ["개", "명", "년"];
const FOREIGN: [&str; 4] = ["DNA", "IT", "OECD", "TV"];
const HANJA: [&str; 2] = ["世界", "人間"];
const SUFFIXES: [&str; 3] = ["적", "용", "들"];

/// stem + past-tense allomorph -> contracted spelling of the fused part
const CONTRACTIONS: [(&str, &str, &str); 8] = [
    ("나서", "었", "나섰"),
    ("하", "였", "했"),
    ("가", "았", "갔"),
    ("오", "았", "왔"),
    ("보", "았", "봤"),
    ("주", "었", "줬"),
    ("되", "었", "됐"),
    ("크", "었", "컸"),
];

/// noun stems that always carry a homograph sense number
const SENSES: [(&str, u8); 3] = [("세계", 2), ("모자", 1), ("시장", 4)];

fn tail_state(form: &str) -> Option<u32> {
    form.chars().last().and_then(decompose).map(|s| s.tail)
}

fn ends_without_tail(form: &str) -> bool {
    // non-Hangul endings (Latin, digits) pattern with vowel-final stems
    tail_state(form).is_none_or(|tail| tail == 0)
}

fn bright_vowel(form: &str) -> bool {
    // ㅏ or ㅗ in the last syllable selects 았
    form.chars()
        .last()
        .and_then(decompose)
        .is_some_and(|s| s.vowel == 0 || s.vowel == 8)
}

fn past_allomorph(stem: &str) -> &'static str {
    if stem == "하" {
        "였"
    } else if bright_vowel(stem) {
        "았"
    } else {
        "었"
    }
}

/// Append a canonical form to a surface under construction, fusing a
/// leading lone jamo into the previous syllable's empty tail slot.
fn push_form(surface: &mut String, form: &str) {
    let mut chars = form.chars();
    let first = match chars.next() {
        Some(c) => c,
        None => return,
    };
    if let Some(last) = surface.chars().last() {
        if let Some(fused) = attach_tail(last, first) {
            surface.pop();
            surface.push(fused);
            surface.push_str(chars.as_str());
            return;
        }
    }
    surface.push_str(form);
}

/// Build the written eojeol for a canonical morpheme sequence, applying
/// the contraction table and jamo fusion.
fn build_surface(morphemes: &[Morpheme]) -> String {
    let mut surface = String::new();
    let mut skip = false;
    for (i, morpheme) in morphemes.iter().enumerate() {
        if skip {
            skip = false;
            continue;
        }
        if let Some(next) = morphemes.get(i + 1) {
            if next.tag == EP {
                if let Some(&(_, _, fused)) = CONTRACTIONS
                    .iter()
                    .find(|(stem, ep, _)| *stem == morpheme.form && *ep == next.form)
                {
                    surface.push_str(fused);
                    skip = true;
                    continue;
                }
            }
        }
        push_form(&mut surface, &morpheme.form);
    }
    surface
}

fn sense_of(form: &str) -> Option<u8> {
    SENSES
        .iter()
        .find(|(stem, _)| *stem == form)
        .map(|&(_, sense)| sense)
}

fn morpheme(form: &str, tag: SejongTag) -> Morpheme {
    Morpheme {
        form: form.to_string(),
        tag,
        sense: sense_of(form),
    }
}

fn pick<'a>(rng: &mut ChaCha8Rng, bank: &[&'a str]) -> &'a str {
    bank[rng.gen_range(0..bank.len())]
}

/// A noun-family stem: form plus its tag.
fn noun_stem(rng: &mut ChaCha8Rng) -> Morpheme {
    match rng.gen_range(0..10) {
        0..=5 => morpheme(pick(rng, &NOUNS), NNG),
        6..=7 => morpheme(pick(rng, &PROPER), NNP),
        8 => morpheme(pick(rng, &PRONOUNS), NP),
        _ => morpheme(pick(rng, &FOREIGN), SL),
    }
}

fn case_marker(rng: &mut ChaCha8Rng, stem: &str) -> Morpheme {
    let open = ends_without_tail(stem);
    match rng.gen_range(0..10) {
        0..=2 => morpheme(if open { "가" } else { "이" }, JKS),
        3..=4 => morpheme(if open { "를" } else { "을" }, JKO),
        5..=6 => morpheme(if open { "는" } else { "은" }, JX),
        7 => {
            // 로 also follows an ㄹ tail
            let ro = open || tail_state(stem) == Some(8);
            morpheme(if ro { "로" } else { "으로" }, JKB)
        }
        8 => morpheme("에서", JKB),
        _ => morpheme("의", JKG),
    }
}

fn eojeol(morphemes: Vec<Morpheme>) -> EojeolAnalysis {
    EojeolAnalysis {
        surface: build_surface(&morphemes),
        morphemes,
        record_id: None,
    }
}

/// A subject/object/adverbial noun eojeol, sometimes with a derivational
/// suffix before the marker.
fn noun_eojeol(rng: &mut ChaCha8Rng) -> EojeolAnalysis {
    let stem = noun_stem(rng);
    let mut morphemes = vec![stem];
    if morphemes[0].tag == NNG && rng.gen_range(0..5) == 0 {
        morphemes.push(morpheme(pick(rng, &SUFFIXES), XSN));
    }
    let last = morphemes.last().unwrap().form.clone();
    if rng.gen_range(0..10) < 8 {
        morphemes.push(case_marker(rng, &last));
    }
    if rng.gen_range(0..8) == 0 {
        morphemes.push(morpheme(",", SP));
    }
    eojeol(morphemes)
}

/// The 세계적인 pattern: noun + 적 + copula + adnominal ㄴ.
fn adnominal_eojeol(rng: &mut ChaCha8Rng) -> EojeolAnalysis {
    let stem = pick(rng, &NOUNS);
    eojeol(vec![
        morpheme(stem, NNG),
        morpheme("적", XSN),
        morpheme("이", VCP),
        morpheme("ㄴ", ETM),
    ])
}

/// A counted quantity: numeral + bound noun, e.g. 3개.
fn numeral_eojeol(rng: &mut ChaCha8Rng) -> EojeolAnalysis {
    let n = rng.gen_range(1..100).to_string();
    eojeol(vec![morpheme(&n, SN), morpheme(pick(rng, &COUNTERS), NNB)])
}

/// A noun wrapped in paired quotes or brackets, an interior-symbol eojeol.
fn quoted_eojeol(rng: &mut ChaCha8Rng) -> EojeolAnalysis {
    let (open, close) = [("(", ")"), ("“", "”"), ("‘", "’")][rng.gen_range(0..3)];
    let stem = noun_stem(rng);
    let mut morphemes = vec![morpheme(open, SS), stem, morpheme(close, SS)];
    if rng.gen_range(0..2) == 0 {
        let last = morphemes[1].form.clone();
        let marker = case_marker(rng, &last);
        morphemes.push(marker);
    }
    eojeol(morphemes)
}

/// A verb or adjective in modifier position: stem + ㄴ/은.
fn modifier_eojeol(rng: &mut ChaCha8Rng) -> EojeolAnalysis {
    let verb = rng.gen_range(0..2) == 0;
    let stem = if verb {
        pick(rng, &VERBS)
    } else {
        pick(rng, &ADJECTIVES)
    };
    let ending = if ends_without_tail(stem) {
        "ㄴ"
    } else {
        "은"
    };
    eojeol(vec![
        morpheme(stem, if verb { VV } else { VA }),
        morpheme(ending, ETM),
    ])
}

/// The sentence-final predicate: stem, optional past tense, final ending,
/// usually a closing symbol.
fn predicate_eojeol(rng: &mut ChaCha8Rng) -> EojeolAnalysis {
    let adjective = rng.gen_range(0..4) == 0;
    let stem = if adjective {
        pick(rng, &ADJECTIVES)
    } else {
        pick(rng, &VERBS)
    };
    let mut morphemes = vec![morpheme(stem, if adjective { VA } else { VV })];
    let past = rng.gen_range(0..2) == 0;
    if past {
        morphemes.push(morpheme(past_allomorph(stem), EP));
    }
    if rng.gen_range(0..3) == 0 {
        // polite: ㅂ니다 fuses into an open syllable, 습니다 follows a tail
        let open = !past && ends_without_tail(stem);
        morphemes.push(morpheme(if open { "ㅂ니다" } else { "습니다" }, EF));
    } else {
        morphemes.push(morpheme("다", EF));
    }
    match rng.gen_range(0..10) {
        0..=6 => morphemes.push(morpheme(pick(rng, &[".", ".", ".", "?", "!"]), SF)),
        7 => morphemes.push(morpheme("…", SE)),
        _ => {}
    }
    eojeol(morphemes)
}

fn sentence_eojeols(rng: &mut ChaCha8Rng) -> Vec<EojeolAnalysis> {
    let mut eojeols = Vec::new();
    if rng.gen_range(0..4) == 0 {
        eojeols.push(eojeol(vec![morpheme(pick(rng, &DETERMINERS), MM)]));
    }
    if rng.gen_range(0..5) == 0 {
        eojeols.push(adnominal_eojeol(rng));
    }
    eojeols.push(noun_eojeol(rng));
    for _ in 0..rng.gen_range(0..3) {
        match rng.gen_range(0..8) {
            0 => eojeols.push(eojeol(vec![morpheme(pick(rng, &ADVERBS), MAG)])),
            1 => eojeols.push(numeral_eojeol(rng)),
            2 => eojeols.push(quoted_eojeol(rng)),
            3 => eojeols.push(modifier_eojeol(rng)),
            4 => eojeols.push(eojeol(vec![morpheme(pick(rng, &HANJA), SH)])),
            _ => eojeols.push(noun_eojeol(rng)),
        }
    }
    eojeols.push(predicate_eojeol(rng));
    eojeols
}

/// Generate `count` analyzed sentences. The same seed and count always
/// produce byte-identical corpora.
pub fn generate_corpus(seed: u64, count: usize) -> Vec<Sentence> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| Sentence {
            id: format!("GENA{:04}-{:08}", seed % 10_000, i + 1),
            eojeols: sentence_eojeols(&mut rng),
        })
        .collect()
}

const PHRASE_LABELS: [&str; 7] = ["NP", "VP", "AP", "NP-SBJ", "NP-OBJ", "NP-AJT", "VP-MOD"];

fn leaf_of(index: usize, eojeol: &EojeolAnalysis) -> SyntaxTree {
    SyntaxTree::Leaf {
        token: TokenGroup {
            eojeol_index: index,
            morpheme_range: 0..eojeol.morphemes.len(),
            rendered_form: eojeol.surface.clone(),
            morphemes: eojeol.morphemes.clone(),
            analysis_complete: true,
        },
    }
}

fn build_tree(
    rng: &mut ChaCha8Rng,
    eojeols: &[EojeolAnalysis],
    lo: usize,
    hi: usize,
) -> SyntaxTree {
    if hi - lo == 1 {
        return leaf_of(lo, &eojeols[lo]);
    }
    let split = rng.gen_range(lo + 1..hi);
    let label = pick(rng, &PHRASE_LABELS).to_string();
    SyntaxTree::Phrase {
        label,
        children: vec![
            build_tree(rng, eojeols, lo, split),
            build_tree(rng, eojeols, split, hi),
        ],
    }
}

/// Generate `count` constituency trees over generated sentences. Leaves are
/// complete whole-eojeol analyses carrying their written surfaces.
pub fn generate_trees(seed: u64, count: usize) -> Vec<SyntaxTree> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let eojeols = sentence_eojeols(&mut rng);
            if eojeols.len() == 1 {
                return SyntaxTree::Phrase {
                    label: "S".to_string(),
                    children: vec![leaf_of(0, &eojeols[0])],
                };
            }
            let split = rng.gen_range(1..eojeols.len());
            SyntaxTree::Phrase {
                label: "S".to_string(),
                children: vec![
                    build_tree(&mut rng, &eojeols, 0, split),
                    build_tree(&mut rng, &eojeols, split, eojeols.len()),
                ],
            }
        })
        .collect()
}
