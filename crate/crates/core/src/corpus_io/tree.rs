//! Bracketed constituency trees.
//!
//! Two terminal spellings share one grammar. A source treebank stores each
//! eojeol as its analysis string directly under a phrase label:
//! `(NP-SBJ 웅가로/NNP+가/JKS)`. A level-converted tree stores preterminals
//! as `(NNP+JKS 웅가로가)`. The reader tells them apart by the unescaped
//! `/` that every analysis string contains, so both kinds of file (and
//! mixtures, e.g. partially converted output) parse with the same code.
//!
//! Analysis leaves carry no written surface, so the reader synthesizes one:
//! canonical forms concatenated, with a lone ending jamo composed into the
//! tail slot of a preceding open syllable (세계+적+이+ㄴ → 세계적인).
//! Contractions are not synthesized (나서+었+다 reads back 나서었다);
//! `granularity::attach_surfaces` grafts true surfaces from the aligned
//! analyzed corpus when they matter.

use super::analysis::{format_analysis, parse_analysis, push_escaped, unescape};
use super::FormatError;
use crate::hangul;
use crate::model::{parse_composite_tag, Morpheme, SyntaxTree, TokenGroup};

/// Concatenate canonical forms into a plausible written surface, fusing lone
/// ending jamo into a preceding tail-less syllable.
fn fuse_forms(morphemes: &[Morpheme]) -> String {
    let mut surface = String::new();
    for m in morphemes {
        let mut rest = m.form.as_str();
        if let Some(first) = m.form.chars().next() {
            if hangul::is_lone_ending_jamo(first) {
                if let Some(host) = surface.chars().last() {
                    if let Some(fused) = hangul::attach_tail(host, first) {
                        surface.truncate(surface.len() - host.len_utf8());
                        surface.push(fused);
                        rest = &m.form[first.len_utf8()..];
                    }
                }
            }
        }
        surface.push_str(rest);
    }
    surface
}

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    next_eojeol: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            chars: text.chars().peekable(),
            line: 1,
            next_eojeol: 0,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next();
        if c == Some('\n') {
            self.line += 1;
        }
        c
    }

    fn skip_whitespace(&mut self) {
        while self.chars.peek().is_some_and(|c| c.is_whitespace()) {
            self.bump();
        }
    }

    fn err(&self, message: impl Into<String>) -> FormatError {
        FormatError::new(self.line, message)
    }

    /// Read one atom: characters up to whitespace or an unescaped paren.
    /// Escapes are kept so analysis parsing can split on unescaped `/`/`+`.
    fn atom(&mut self) -> Result<String, FormatError> {
        let mut out = String::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() || c == '(' || c == ')' {
                break;
            }
            self.bump();
            if c == '\\' {
                match self.bump() {
                    Some(next) => {
                        out.push('\\');
                        out.push(next);
                    }
                    None => return Err(self.err("dangling escape")),
                }
            } else {
                out.push(c);
            }
        }
        if out.is_empty() {
            return Err(self.err("expected a label or leaf"));
        }
        Ok(out)
    }

    fn node(&mut self) -> Result<SyntaxTree, FormatError> {
        // caller consumed the opening paren
        self.skip_whitespace();
        let label = self.atom()?;
        enum Item {
            Subtree(SyntaxTree),
            // frontier position is claimed at parse time so leaves and
            // subtrees stay in source order
            Atom {
                text: String,
                line: usize,
                eojeol_index: usize,
            },
        }
        let mut items: Vec<Item> = Vec::new();
        loop {
            self.skip_whitespace();
            match self.chars.peek() {
                None => return Err(self.err("unbalanced parentheses: missing ')'")),
                Some(')') => {
                    self.bump();
                    break;
                }
                Some('(') => {
                    self.bump();
                    items.push(Item::Subtree(self.node()?));
                }
                Some(_) => {
                    let line = self.line;
                    let text = self.atom()?;
                    items.push(Item::Atom {
                        text,
                        line,
                        eojeol_index: self.take_eojeol_index(),
                    });
                }
            }
        }
        if let [Item::Atom {
            text,
            line,
            eojeol_index,
        }] = &items[..]
        {
            if !has_unescaped_slash(text) {
                // (TAG form): a converted preterminal. Composite tags carry
                // the part-of-speech split but not the per-morpheme forms, so
                // multi-tag tokens get placeholder morphemes marked
                // incomplete.
                let tags = parse_composite_tag(&label).map_err(|e| {
                    FormatError::new(*line, format!("{e} (leaf {text:?} has no analysis)"))
                })?;
                let rendered_form = unescape(text);
                let token = TokenGroup {
                    eojeol_index: *eojeol_index,
                    morpheme_range: 0..tags.len(),
                    morphemes: tags
                        .iter()
                        .map(|&tag| Morpheme {
                            form: rendered_form.clone(),
                            tag,
                            sense: None,
                        })
                        .collect(),
                    analysis_complete: tags.len() == 1,
                    rendered_form,
                };
                return Ok(SyntaxTree::Preterminal { token });
            }
        }
        let mut children = Vec::with_capacity(items.len());
        for item in items {
            children.push(match item {
                Item::Subtree(tree) => tree,
                Item::Atom {
                    text,
                    line,
                    eojeol_index,
                } => {
                    let morphemes = parse_analysis(&text, line)?;
                    let token = TokenGroup {
                        eojeol_index,
                        morpheme_range: 0..morphemes.len(),
                        rendered_form: fuse_forms(&morphemes),
                        morphemes,
                        analysis_complete: true,
                    };
                    SyntaxTree::Leaf { token }
                }
            });
        }
        if children.is_empty() {
            return Err(self.err(format!("empty phrase ({label})")));
        }
        Ok(SyntaxTree::Phrase { label, children })
    }

    fn take_eojeol_index(&mut self) -> usize {
        let i = self.next_eojeol;
        self.next_eojeol += 1;
        i
    }
}

fn has_unescaped_slash(s: &str) -> bool {
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' => {
                chars.next();
            }
            '/' => return true,
            _ => {}
        }
    }
    false
}

/// Read every tree in `text`. Whitespace between tokens is free-form, so
/// both one-line and indented files parse.
pub fn read_treebank(text: &str) -> Result<Vec<SyntaxTree>, FormatError> {
    let mut parser = Parser::new(text);
    let mut trees = Vec::new();
    loop {
        parser.skip_whitespace();
        match parser.chars.peek() {
            None => break,
            Some('(') => {
                parser.bump();
                parser.next_eojeol = 0;
                trees.push(parser.node()?);
            }
            Some(c) => {
                let c = *c;
                return Err(parser.err(format!("expected '(' to open a tree, found {c:?}")));
            }
        }
    }
    Ok(trees)
}

/// Serialize one tree on one line. Analysis leaves print as their analysis
/// string (senses preserved), preterminals as `(TAG written-form)`.
pub fn write_bracketed(tree: &SyntaxTree) -> String {
    let mut out = String::new();
    write_node(tree, &mut out);
    out
}

/// One tree per line, trailing newline.
pub fn write_treebank(trees: &[SyntaxTree]) -> String {
    let mut out = String::new();
    for tree in trees {
        write_node(tree, &mut out);
        out.push('\n');
    }
    out
}

fn write_node(tree: &SyntaxTree, out: &mut String) {
    match tree {
        SyntaxTree::Phrase { label, children } => {
            out.push('(');
            out.push_str(label);
            for child in children {
                out.push(' ');
                write_node(child, out);
            }
            out.push(')');
        }
        SyntaxTree::Preterminal { token } => {
            out.push('(');
            out.push_str(&token.composite_tag());
            out.push(' ');
            push_escaped(out, &token.rendered_form, &['(', ')']);
            out.push(')');
        }
        SyntaxTree::Leaf { token } => {
            let analysis = format_analysis(&token.morphemes, true);
            // re-escape parens on top of the analysis escaping
            for c in analysis.chars() {
                if c == '(' || c == ')' {
                    out.push('\\');
                }
                out.push(c);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Level;
    use crate::tags::SejongTag::*;

    const FIG_TREE: &str =
        "(S (NP-SBJ (NP 엠마누엘/NNP) (NP-SBJ 웅가로/NNP+가/JKS)) (VP 나서/VV+었/EP+다/EF+./SF))";

    #[test]
    fn reads_analysis_leaves_with_synthesized_surfaces() {
        let trees = read_treebank(FIG_TREE).unwrap();
        assert_eq!(trees.len(), 1);
        let leaves = trees[0].leaves();
        assert_eq!(leaves.len(), 3);
        assert_eq!(leaves[0].rendered_form, "엠마누엘");
        assert_eq!(leaves[1].rendered_form, "웅가로가");
        // contraction is not synthesizable; canonical concatenation stands in
        assert_eq!(leaves[2].rendered_form, "나서었다.");
        assert_eq!(leaves[2].composite_tag(), "VV+EP+EF+SF");
        assert_eq!(leaves[1].eojeol_index, 1);
    }

    #[test]
    fn jamo_fusion_synthesizes_fused_spellings() {
        let trees = read_treebank("(VNP-MOD 세계/NNG+적/XSN+이/VCP+ㄴ/ETM)").unwrap();
        assert_eq!(trees[0].leaves()[0].rendered_form, "세계적인");
        // ㅂ fuses the same way: 이+ㅂ니다 → 입니다
        let trees = read_treebank("(VP 이/VCP+ㅂ니다/EF)").unwrap();
        assert_eq!(trees[0].leaves()[0].rendered_form, "입니다");
    }

    #[test]
    fn writing_a_raw_tree_reproduces_the_text() {
        let trees = read_treebank(FIG_TREE).unwrap();
        assert_eq!(write_bracketed(&trees[0]), FIG_TREE);
    }

    #[test]
    fn indented_input_parses_to_the_same_tree() {
        let pretty = "(S\n  (NP-SBJ (NP 엠마누엘/NNP)\n          (NP-SBJ 웅가로/NNP+가/JKS))\n  (VP 나서/VV+었/EP+다/EF+./SF))\n";
        assert_eq!(
            read_treebank(pretty).unwrap(),
            read_treebank(FIG_TREE).unwrap()
        );
    }

    #[test]
    fn converted_trees_round_trip_through_text() {
        let raw = read_treebank(FIG_TREE).unwrap().remove(0);
        for level in Level::ALL {
            let converted = crate::granularity::convert_tree(&raw, level).unwrap();
            let text = write_bracketed(&converted);
            let back = read_treebank(&text).unwrap().remove(0);
            assert_eq!(write_bracketed(&back), text, "{level}");
        }
        let l2 = crate::granularity::convert_tree(&raw, Level::L2).unwrap();
        assert_eq!(
            write_bracketed(&l2),
            "(S (NP-SBJ (NP (NNP 엠마누엘)) (NP-SBJ (NNP+JKS 웅가로가))) (VP (VV+EP+EF 나서었다) (SF .)))"
        );
    }

    #[test]
    fn composite_preterminals_read_back_as_incomplete() {
        let trees = read_treebank("(VP (VV+EP+EF 나섰다) (SF .))").unwrap();
        let leaves = trees[0].leaves();
        assert!(!leaves[0].analysis_complete);
        assert_eq!(leaves[0].morphemes.len(), 3);
        assert_eq!(leaves[0].morphemes[1].tag, EP);
        assert!(leaves[1].analysis_complete); // single-tag preterminal is fully known
        assert_eq!(leaves[1].morphemes[0], Morpheme::new(".", SF));
    }

    #[test]
    fn a_phrase_label_that_is_also_a_tag_stays_a_phrase() {
        // NP is both a phrase label and the pronoun tag; the analysis leaf
        // keeps this unambiguous in both directions.
        let text = "(S (NP 누구/NP) (VP 가/VV+ㄴ다/EF))";
        let trees = read_treebank(text).unwrap();
        assert_eq!(write_bracketed(&trees[0]), text);
        match &trees[0] {
            SyntaxTree::Phrase { children, .. } => {
                assert!(matches!(children[0], SyntaxTree::Phrase { .. }));
            }
            _ => panic!("root must be a phrase"),
        }
    }

    #[test]
    fn escaped_symbol_forms_survive_tree_leaves() {
        let text = r"(S (NP \(/SS+의상/NNG+\)/SS) (VP 하/VV+다/EF))";
        let trees = read_treebank(text).unwrap();
        let leaves = trees[0].leaves();
        assert_eq!(leaves[0].morphemes[0].form, "(");
        assert_eq!(leaves[0].rendered_form, "(의상)");
        assert_eq!(write_bracketed(&trees[0]), text);
    }

    #[test]
    fn structural_errors_are_positioned() {
        assert!(read_treebank("(NP")
            .unwrap_err()
            .message
            .contains("unbalanced"));
        assert!(read_treebank("(NP)")
            .unwrap_err()
            .message
            .contains("empty phrase"));
        let err = read_treebank("(S (NP 의상/NNG)\n(NP 직물/BOGUS))").unwrap_err();
        assert_eq!(err.line, 2);
        assert!(read_treebank("x").is_err());
    }
}
