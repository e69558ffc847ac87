//! Regenerates the generated test fixtures in tests/data. The example and
//! golden files are hand-maintained; only the two generated corpora are
//! written here. Run after changing the generator:
//!
//!     cargo run -p kseg-core --example regen_fixtures

use std::path::Path;

use kseg_core::corpus_io::{write_morph_corpus, write_treebank};
use kseg_core::gen::{generate_corpus, generate_trees};

fn main() {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let corpus = write_morph_corpus(&generate_corpus(42, 200));
    std::fs::write(data.join("mini_corpus.txt"), corpus).expect("write mini_corpus.txt");
    let trees = write_treebank(&generate_trees(7, 60));
    std::fs::write(data.join("mini_treebank.txt"), trees).expect("write mini_treebank.txt");
    println!("fixtures regenerated under {}", data.display());
}
