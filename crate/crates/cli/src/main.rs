//! `kseg`: batch front end for the segmentation-granularity toolkit.
//!
//! Subcommands cover the full experiment loop: convert corpora between
//! formats at a chosen granularity level, print per-level corpus statistics,
//! split a corpus deterministically, train the statistical segmenting
//! tagger, tag raw text, and score segmentation, tagging, parses, and
//! translations. Every command is deterministic: identical invocations on
//! identical inputs produce byte-identical outputs.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error (unreadable file,
//! malformed input, mismatched evaluation pair).

use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use kseg_core::corpus_io::{
    read_morph_corpus, read_tokens, read_treebank, write_conllu_corpus, write_morph_corpus,
    write_tokens, write_treebank,
};
use kseg_core::granularity::{
    convert_tree_with, expand_tree_to_level5, has_interior_symbol, segment_sentence_with,
    tree_to_sentence, SymbolSplit,
};
use kseg_core::metrics::{
    bleu, bracket_prf, corpus_stats_with, stats_machine, stats_table, BracketConfig, StatsRow,
};
use kseg_core::tagger::{evaluate_pipeline, train, TaggerModel};
use kseg_core::{Level, SegmentedSentence, Sentence};

#[derive(Parser)]
#[command(
    name = "kseg",
    version,
    about = "Korean word-segmentation granularity toolkit",
    propagate_version = true
)]
struct Cli {
    /// Random seed, accepted for reproducibility bookkeeping; every command
    /// is deterministic and never draws random numbers
    #[arg(long, global = true, default_value_t = 0, hide_short_help = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert between corpus formats at a granularity level
    Convert(ConvertArgs),
    /// Per-level corpus statistics as an aligned table
    Stats(StatsArgs),
    /// Deterministic train/evaluation split, preserving sentence order
    Split(SplitArgs),
    /// Train a segmenting tagger on an analyzed corpus
    Train(TrainArgs),
    /// Segment and tag raw text with a trained model
    Tag(TagArgs),
    /// Word-segmentation precision/recall/f1 of a model on a gold corpus
    EvalSeg(EvalModelArgs),
    /// Eojeol part-of-speech accuracy of a model on a gold corpus
    EvalPos(EvalModelArgs),
    /// Bracket precision/recall/f1 between two treebanks
    EvalParse(EvalParseArgs),
    /// Corpus BLEU of hypothesis token lines against reference lines
    EvalBleu(EvalBleuArgs),
}

/// On-disk formats a conversion can name.
#[derive(Debug, Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Tab-separated morphological analysis, one eojeol per line
    SejongMorph,
    /// Bracketed constituency trees, one per line
    SejongTree,
    /// CoNLL-U with multiword-token ranges
    Conllu,
    /// Space-separated written token forms, one sentence per line
    Tokens,
    /// Bracketed trees with level-converted preterminals
    Bracketed,
}

impl Display for Format {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Format::SejongMorph => "sejong-morph",
            Format::SejongTree => "sejong-tree",
            Format::Conllu => "conllu",
            Format::Tokens => "tokens",
            Format::Bracketed => "bracketed",
        };
        f.write_str(name)
    }
}

/// Which symbol morphemes split off at Levels 2-4.
#[derive(Debug, Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Symbols {
    /// Split every symbol morpheme
    All,
    /// Split only quotation and bracketing symbols
    QuotesOnly,
}

impl Symbols {
    fn policy(self) -> SymbolSplit {
        match self {
            Symbols::All => SymbolSplit::All,
            Symbols::QuotesOnly => SymbolSplit::QuotesOnly,
        }
    }
}

#[derive(clap::Args)]
struct ConvertArgs {
    /// Granularity level 1-5
    #[arg(long)]
    level: Level,
    /// Input format: sejong-morph or sejong-tree
    #[arg(long)]
    from: Format,
    /// Output format: conllu or tokens (morph input), bracketed, conllu, or
    /// tokens (tree input)
    #[arg(long)]
    to: Format,
    /// Symbol-splitting policy at Levels 2-4
    #[arg(long, value_enum, default_value_t = Symbols::All)]
    symbols: Symbols,
    /// Input file
    input: PathBuf,
    /// Output file
    output: PathBuf,
}

#[derive(clap::Args)]
struct StatsArgs {
    /// Level selection: one level ("3") or an inclusive range ("1..5")
    #[arg(long, default_value = "1..5")]
    level: String,
    /// Symbol-splitting policy at Levels 2-4
    #[arg(long, value_enum, default_value_t = Symbols::All)]
    symbols: Symbols,
    /// Print machine-readable key=value lines instead of the table
    #[arg(long)]
    machine: bool,
    /// Morphologically analyzed corpus
    corpus: PathBuf,
}

#[derive(clap::Args)]
struct SplitArgs {
    /// Training fraction in (0,1); with the default 0.9 every 10th sentence
    /// is held out (the stride is 1/(1-fraction), rounded)
    #[arg(long, default_value_t = 0.9)]
    fraction: f64,
    /// Morphologically analyzed corpus
    corpus: PathBuf,
    /// Training partition output
    train_out: PathBuf,
    /// Evaluation partition output
    eval_out: PathBuf,
}

#[derive(clap::Args)]
struct TrainArgs {
    /// Granularity level 1-5 the model segments to
    #[arg(long)]
    level: Level,
    /// Additive smoothing constant, must be positive
    #[arg(long, default_value_t = 0.1)]
    smoothing: f64,
    /// Morphologically analyzed training corpus
    corpus: PathBuf,
    /// Model file output
    model_out: PathBuf,
}

#[derive(clap::Args)]
struct TagArgs {
    /// Trained model file
    #[arg(long)]
    model: PathBuf,
    /// Raw text, one sentence per line (blank lines skipped)
    input: PathBuf,
    /// CoNLL-U output
    output: PathBuf,
}

#[derive(clap::Args)]
struct EvalModelArgs {
    /// Trained model file
    #[arg(long)]
    model: PathBuf,
    /// Gold morphologically analyzed corpus; its surface text is re-analyzed
    gold: PathBuf,
}

#[derive(clap::Args)]
struct EvalParseArgs {
    /// Score unlabeled brackets
    #[arg(long)]
    unlabeled: bool,
    /// Exclude the root constituent from scoring
    #[arg(long)]
    skip_root: bool,
    /// Collapse functional tags before comparing (NP-SBJ scores as NP)
    #[arg(long)]
    strip_functional_tags: bool,
    /// Gold treebank, bracketed
    gold: PathBuf,
    /// Predicted treebank, bracketed
    pred: PathBuf,
}

#[derive(clap::Args)]
struct EvalBleuArgs {
    /// Reference token lines
    references: PathBuf,
    /// Hypothesis token lines
    hypotheses: PathBuf,
}

/// A failed command: usage errors exit 1, data errors exit 2, one line on
/// stderr either way.
enum Failure {
    Usage(String),
    Data(String),
}

fn usage(message: impl Into<String>) -> Failure {
    Failure::Usage(message.into())
}

/// Tags an error with the file it came from.
fn in_file<E: Display>(path: &Path) -> impl Fn(E) -> Failure + '_ {
    move |e| Failure::Data(format!("{}: {e}", path.display()))
}

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(in_file(path))
}

fn write_output(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(in_file(path))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version land here too; they are not errors.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(message)) => {
            eprintln!("usage error: {message}");
            ExitCode::from(1)
        }
        Err(Failure::Data(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Convert(args) => convert(args),
        Command::Stats(args) => stats(args),
        Command::Split(args) => split(args),
        Command::Train(args) => train_cmd(args),
        Command::Tag(args) => tag(args),
        Command::EvalSeg(args) => eval_model(args, Score::Segmentation),
        Command::EvalPos(args) => eval_model(args, Score::PosAccuracy),
        Command::EvalParse(args) => eval_parse(args),
        Command::EvalBleu(args) => eval_bleu(args),
    }
}

fn convert(args: ConvertArgs) -> Result<(), Failure> {
    match (args.from, args.to) {
        (Format::SejongMorph, Format::Conllu | Format::Tokens) => {}
        (Format::SejongTree, Format::Bracketed | Format::Conllu | Format::Tokens) => {}
        (from, to) => {
            return Err(usage(format!(
                "cannot convert {from} to {to}; supported: sejong-morph -> conllu|tokens, \
                 sejong-tree -> bracketed|conllu|tokens"
            )))
        }
    }
    let text = read_input(&args.input)?;
    let policy = args.symbols.policy();
    let output = match args.from {
        Format::SejongMorph => {
            let corpus = read_morph_corpus(&text).map_err(in_file(&args.input))?;
            report_interior_symbols(&corpus);
            let segmented = segment_all(&corpus, args.level, policy);
            match args.to {
                Format::Conllu => write_conllu_corpus(&segmented),
                _ => write_tokens(&segmented),
            }
        }
        _ => {
            let trees = read_treebank(&text).map_err(in_file(&args.input))?;
            if args.to == Format::Bracketed {
                let converted: Result<Vec<_>, _> = trees
                    .iter()
                    .map(|t| convert_tree_with(t, args.level, policy))
                    .collect();
                write_treebank(&converted.map_err(in_file(&args.input))?)
            } else {
                let mut corpus = Vec::with_capacity(trees.len());
                for (i, tree) in trees.iter().enumerate() {
                    corpus.push(
                        tree_to_sentence(tree, format!("s{}", i + 1))
                            .map_err(in_file(&args.input))?,
                    );
                }
                report_interior_symbols(&corpus);
                let segmented = segment_all(&corpus, args.level, policy);
                match args.to {
                    Format::Conllu => write_conllu_corpus(&segmented),
                    _ => write_tokens(&segmented),
                }
            }
        }
    };
    write_output(&args.output, &output)
}

fn segment_all(corpus: &[Sentence], level: Level, policy: SymbolSplit) -> Vec<SegmentedSentence> {
    corpus
        .iter()
        .map(|s| segment_sentence_with(s, level, policy))
        .collect()
}

/// Eojeols with a symbol strictly inside them cannot be sliced from the
/// written surface; their groups fall back to canonical morpheme spelling.
/// Worth a note because the fallback changes written forms, not token counts.
fn report_interior_symbols(corpus: &[Sentence]) {
    let n = corpus
        .iter()
        .flat_map(|s| &s.eojeols)
        .filter(|e| has_interior_symbol(e))
        .count();
    if n > 0 {
        eprintln!("note: {n} eojeols have interior symbols; their written forms use canonical morpheme spelling");
    }
}

fn stats(args: StatsArgs) -> Result<(), Failure> {
    let levels = parse_level_selection(&args.level).map_err(Failure::Usage)?;
    let text = read_input(&args.corpus)?;
    let corpus = read_morph_corpus(&text).map_err(in_file(&args.corpus))?;
    let rows: Result<Vec<StatsRow>, _> = levels
        .into_iter()
        .map(|level| corpus_stats_with(&corpus, level, args.symbols.policy()))
        .collect();
    let rows = rows.map_err(in_file(&args.corpus))?;
    print!(
        "{}",
        if args.machine {
            stats_machine(&rows)
        } else {
            stats_table(&rows)
        }
    );
    Ok(())
}

/// "3" selects one level, "1..5" an inclusive range.
fn parse_level_selection(selection: &str) -> Result<Vec<Level>, String> {
    match selection.split_once("..") {
        Some((lo, hi)) => {
            let lo: Level = lo.trim().parse()?;
            let hi: Level = hi.trim().parse()?;
            if lo > hi {
                return Err(format!("empty level range {selection:?}"));
            }
            Ok(Level::ALL
                .iter()
                .copied()
                .filter(|l| (lo..=hi).contains(l))
                .collect())
        }
        None => Ok(vec![selection.trim().parse()?]),
    }
}

fn split(args: SplitArgs) -> Result<(), Failure> {
    if !(args.fraction > 0.0 && args.fraction < 1.0) {
        return Err(usage(format!(
            "--fraction must be in (0,1), got {}",
            args.fraction
        )));
    }
    let stride = (1.0 / (1.0 - args.fraction)).round().max(1.0) as usize;
    let text = read_input(&args.corpus)?;
    let corpus = read_morph_corpus(&text).map_err(in_file(&args.corpus))?;
    let (mut train_part, mut eval_part) = (Vec::new(), Vec::new());
    for (i, sentence) in corpus.into_iter().enumerate() {
        if i % stride == stride - 1 {
            eval_part.push(sentence);
        } else {
            train_part.push(sentence);
        }
    }
    write_output(&args.train_out, &write_morph_corpus(&train_part))?;
    write_output(&args.eval_out, &write_morph_corpus(&eval_part))?;
    println!(
        "train={} eval={} stride={stride}",
        train_part.len(),
        eval_part.len()
    );
    Ok(())
}

fn train_cmd(args: TrainArgs) -> Result<(), Failure> {
    if !(args.smoothing.is_finite() && args.smoothing > 0.0) {
        return Err(usage(format!(
            "--smoothing must be positive, got {}",
            args.smoothing
        )));
    }
    let text = read_input(&args.corpus)?;
    let corpus = read_morph_corpus(&text).map_err(in_file(&args.corpus))?;
    let model = train(&corpus, args.level, args.smoothing).map_err(in_file(&args.corpus))?;
    write_output(&args.model_out, &model.to_text())?;
    println!(
        "level={} dictionary={} forms={} tags={}",
        model.level.as_u8(),
        model.dictionary_len(),
        model.vocabulary_size(),
        model.tag_set_size()
    );
    Ok(())
}

fn load_model(path: &Path) -> Result<TaggerModel, Failure> {
    let text = read_input(path)?;
    TaggerModel::from_text(&text).map_err(in_file(path))
}

fn tag(args: TagArgs) -> Result<(), Failure> {
    let model = load_model(&args.model)?;
    let text = read_input(&args.input)?;
    let mut tagged = Vec::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let mut segmented = model.analyze(line);
        segmented.source.id = format!("s{}", tagged.len() + 1);
        tagged.push(segmented);
    }
    write_output(&args.output, &write_conllu_corpus(&tagged))
}

enum Score {
    Segmentation,
    PosAccuracy,
}

fn eval_model(args: EvalModelArgs, score: Score) -> Result<(), Failure> {
    let model = load_model(&args.model)?;
    let text = read_input(&args.gold)?;
    let gold = read_morph_corpus(&text).map_err(in_file(&args.gold))?;
    let raw: Vec<String> = gold
        .iter()
        .map(|s| {
            s.eojeols
                .iter()
                .map(|e| e.surface.as_str())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    let report = evaluate_pipeline(&model, &raw, &gold).map_err(in_file(&args.gold))?;
    match score {
        Score::Segmentation => {
            println!("precision = {:.2}", report.segmentation.precision * 100.0);
            println!("recall = {:.2}", report.segmentation.recall * 100.0);
            println!("f1 = {:.2}", report.segmentation.f1 * 100.0);
        }
        Score::PosAccuracy => println!("accuracy = {:.2}", report.pos_accuracy * 100.0),
    }
    Ok(())
}

fn eval_parse(args: EvalParseArgs) -> Result<(), Failure> {
    let read = |path: &Path| -> Result<Vec<_>, Failure> {
        let text = read_input(path)?;
        // Expansion to Level 5 makes leaf counts comparable across inputs
        // converted to different levels; phrase brackets are unaffected.
        Ok(read_treebank(&text)
            .map_err(in_file(path))?
            .iter()
            .map(expand_tree_to_level5)
            .collect())
    };
    let gold = read(&args.gold)?;
    let pred = read(&args.pred)?;
    let config = BracketConfig {
        labeled: !args.unlabeled,
        include_root: !args.skip_root,
        strip_functional_tags: args.strip_functional_tags,
    };
    let score = bracket_prf(&gold, &pred, &config).map_err(in_file(&args.pred))?;
    if score.skipped > 0 {
        eprintln!(
            "note: {} sentence pairs skipped (leaf counts differ)",
            score.skipped
        );
    }
    println!("precision = {:.2}", score.report.precision * 100.0);
    println!("recall = {:.2}", score.report.recall * 100.0);
    println!("f1 = {:.2}", score.report.f1 * 100.0);
    Ok(())
}

fn eval_bleu(args: EvalBleuArgs) -> Result<(), Failure> {
    let references = read_tokens(&read_input(&args.references)?);
    let hypotheses = read_tokens(&read_input(&args.hypotheses)?);
    let score = bleu(&references, &hypotheses).map_err(in_file(&args.hypotheses))?;
    println!("bleu = {score:.2}");
    Ok(())
}
