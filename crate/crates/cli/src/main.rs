//! `catsem` batch runner: builds noun vectors and relational-word tensors
//! from plain-text corpora, compares sentences and runs similarity
//! experiments.
//!
//! Diagnostics for skipped inputs go to stderr as a single tab-separated
//! `summary` line so scripts can pick the counts up.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use catsem::corpus::{
    build_from_gathered, count_cooccurrence_par, count_properties, gather_adjective_arguments,
    gather_verb_occurrences, VerbArity, Weighting, DEFAULT_WINDOW,
};
use catsem::evaluation::{
    model_similarity, run_experiment, ExperimentOptions, Model, ModelOptions, RatingAggregation,
    SentencePair, SimilarityDataset,
};
use catsem::formats;
use catsem::pregroup::Lexicon;
use catsem::vectorspace::BasisKind;
use catsem::LexicalSemantics;

#[derive(Parser)]
#[command(
    name = "catsem",
    version,
    about = "Compositional distributional sentence similarity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count co-occurrences (or dependency properties) and write
    /// `basis.txt` and `nouns.tsv` into the semantics directory.
    BuildNouns(BuildNouns),
    /// Build a verb tensor from subject/object triples.
    BuildVerb(BuildVerb),
    /// Build an adjective tensor from adjective/noun pairs.
    BuildAdj(BuildAdj),
    /// Print the similarity of two sentences.
    Sim(Sim),
    /// Score a rated dataset under one or more models.
    Eval(Eval),
}

#[derive(Args)]
struct BuildNouns {
    /// Corpus file, one document per line.
    #[arg(long)]
    corpus: Option<PathBuf>,
    #[arg(long)]
    basis: PathBuf,
    /// Words to build vectors for; defaults to every corpus token.
    #[arg(long)]
    lexicon: Option<PathBuf>,
    /// Triples for property counting on a structured basis.
    #[arg(long)]
    triples: Option<PathBuf>,
    /// Adjective/noun pairs for property counting on a structured basis.
    #[arg(long)]
    adjectives: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    window: usize,
    #[arg(long, default_value = "tfidf")]
    weighting: Weighting,
    /// Output directory.
    #[arg(long, visible_alias = "out")]
    semantics_dir: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Arity {
    Intransitive,
    Transitive,
    Ditransitive,
}

impl From<Arity> for VerbArity {
    fn from(a: Arity) -> Self {
        match a {
            Arity::Intransitive => VerbArity::Intransitive,
            Arity::Transitive => VerbArity::Transitive,
            Arity::Ditransitive => VerbArity::Ditransitive,
        }
    }
}

#[derive(Args)]
struct BuildVerb {
    verb: String,
    #[arg(long)]
    triples: PathBuf,
    /// Directory holding `basis.txt` and `nouns.tsv`.
    #[arg(long)]
    semantics_dir: PathBuf,
    #[arg(long, value_enum, default_value_t = Arity::Transitive)]
    arity: Arity,
    /// Tensor file; defaults to `verbs/VERB.tsv` in the semantics directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BuildAdj {
    adjective: String,
    /// Adjective/noun pairs, `adjective<TAB>noun` per line.
    #[arg(long)]
    adjectives: PathBuf,
    #[arg(long)]
    semantics_dir: PathBuf,
    /// Tensor file; defaults to `adjectives/ADJ.tsv` in the semantics directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScoringArgs {
    #[arg(long)]
    semantics_dir: PathBuf,
    /// Word types, `word<TAB>type` per line.
    #[arg(long)]
    lexicon: PathBuf,
    /// Fold verbs via their tensors even when a plain vector exists.
    #[arg(long)]
    tensor_vectors: bool,
}

impl ScoringArgs {
    fn load(&self) -> Result<(LexicalSemantics, Lexicon)> {
        let lex = formats::load_semantics(&self.semantics_dir)
            .with_context(|| format!("loading {}", self.semantics_dir.display()))?;
        let grammar = Lexicon::load(&self.lexicon)?;
        Ok((lex, grammar))
    }

    fn model_options(&self) -> ModelOptions {
        ModelOptions {
            prefer_plain_vectors: !self.tensor_vectors,
        }
    }
}

#[derive(Args)]
struct Sim {
    sentence_1: String,
    sentence_2: String,
    #[command(flatten)]
    scoring: ScoringArgs,
    #[arg(long, default_value = "categorical")]
    model: Model,
}

#[derive(Clone, Copy, ValueEnum)]
enum Aggregation {
    Mean,
    Pooled,
}

#[derive(Args)]
struct Eval {
    #[arg(long)]
    dataset: PathBuf,
    #[command(flatten)]
    scoring: ScoringArgs,
    /// Repeatable; defaults to every model.
    #[arg(long)]
    model: Vec<Model>,
    #[arg(long, value_enum, default_value_t = Aggregation::Mean)]
    aggregation: Aggregation,
    /// TSV report path; the human-readable table always goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn require_file(path: &Path, what: &str) -> Result<()> {
    ensure!(path.is_file(), "{what} `{}` does not exist", path.display());
    Ok(())
}

fn build_nouns(args: BuildNouns) -> Result<()> {
    require_file(&args.basis, "basis")?;
    let basis = formats::read_basis(&args.basis)?;
    let (acc, documents) = match &args.corpus {
        Some(corpus) => {
            require_file(corpus, "corpus")?;
            let docs = formats::read_corpus(corpus)?;
            ensure!(!docs.is_empty(), "corpus `{}` is empty", corpus.display());
            let targets: BTreeSet<String> = match &args.lexicon {
                Some(l) => Lexicon::load(l)?
                    .iter()
                    .map(|(w, _)| w.to_owned())
                    .collect(),
                None => docs.iter().flatten().cloned().collect(),
            };
            let oov = docs
                .iter()
                .flatten()
                .filter(|t| basis.index_of(t).is_none() && !targets.contains(*t))
                .count();
            let acc = count_cooccurrence_par(&docs, &targets, &basis, args.window)?;
            (acc, format!("documents={}\toov_tokens={oov}", docs.len()))
        }
        None => {
            ensure!(
                args.triples.is_some() || args.adjectives.is_some(),
                "build-nouns needs --corpus, or --triples/--adjectives with a structured basis"
            );
            ensure!(
                basis.kind() == BasisKind::Structured,
                "property counting needs a basis file with `# kind: structured`"
            );
            let triples = match &args.triples {
                Some(p) => formats::read_triples(p)?,
                None => Vec::new(),
            };
            let adjectives = match &args.adjectives {
                Some(p) => formats::read_adjectives(p)?,
                None => Vec::new(),
            };
            ensure!(
                !triples.is_empty() || !adjectives.is_empty(),
                "no property records to count"
            );
            let targets: BTreeSet<String> = match &args.lexicon {
                Some(l) => Lexicon::load(l)?
                    .iter()
                    .map(|(w, _)| w.to_owned())
                    .collect(),
                None => triples
                    .iter()
                    .flat_map(|t| t.arguments().into_iter().map(str::to_owned))
                    .chain(adjectives.iter().map(|a| a.argument.clone()))
                    .collect(),
            };
            let acc = count_properties(&triples, &adjectives, &targets, &basis)?;
            let n = triples.len() + adjectives.len();
            (acc, format!("documents={n}\toov_tokens=0"))
        }
    };
    let vectors = args.weighting.apply(&acc)?;
    let zero = vectors.values().filter(|v| v.is_zero()).count();
    formats::write_atomic(
        &args.semantics_dir.join(formats::BASIS_FILE),
        &formats::format_basis(&basis),
    )?;
    formats::write_atomic(
        &args.semantics_dir.join(formats::NOUNS_FILE),
        &formats::format_vector_set_with_zeros(&vectors, &basis),
    )?;
    eprintln!(
        "summary\tvectors={}\tzero_vectors={zero}\t{documents}",
        vectors.len()
    );
    Ok(())
}

fn build_verb(args: BuildVerb) -> Result<()> {
    require_file(&args.triples, "triples")?;
    let lex = formats::load_semantics(&args.semantics_dir)
        .with_context(|| format!("loading {}", args.semantics_dir.display()))?;
    let triples = formats::read_triples(&args.triples)?;
    let arity = VerbArity::from(args.arity);
    let gathered = gather_verb_occurrences(&triples, &args.verb, arity, lex.vectors());
    if !triples.is_empty() && gathered.matched == 0 {
        bail!(
            "verb `{}` has no {} occurrences in `{}`",
            args.verb,
            arity.name(),
            args.triples.display()
        );
    }
    let tensor = build_from_gathered(lex.space(), arity, &gathered)?;
    let out = args.out.unwrap_or_else(|| {
        args.semantics_dir
            .join(formats::VERBS_DIR)
            .join(format!("{}.tsv", args.verb))
    });
    formats::write_atomic(&out, &formats::format_tensor(&tensor))?;
    eprintln!(
        "summary\tmatched={}\tused={}\tskipped={}",
        gathered.matched,
        gathered.arguments.len(),
        gathered.skipped
    );
    Ok(())
}

fn build_adj(args: BuildAdj) -> Result<()> {
    require_file(&args.adjectives, "adjectives")?;
    let lex = formats::load_semantics(&args.semantics_dir)
        .with_context(|| format!("loading {}", args.semantics_dir.display()))?;
    let records = formats::read_adjectives(&args.adjectives)?;
    let gathered = gather_adjective_arguments(&records, &args.adjective, lex.vectors());
    if !records.is_empty() && gathered.matched == 0 {
        bail!(
            "adjective `{}` does not occur in `{}`",
            args.adjective,
            args.adjectives.display()
        );
    }
    let tensor = build_from_gathered(lex.space(), VerbArity::Intransitive, &gathered)?;
    let out = args.out.unwrap_or_else(|| {
        args.semantics_dir
            .join(formats::ADJECTIVES_DIR)
            .join(format!("{}.tsv", args.adjective))
    });
    formats::write_atomic(&out, &formats::format_tensor(&tensor))?;
    eprintln!(
        "summary\tmatched={}\tused={}\tskipped={}",
        gathered.matched,
        gathered.arguments.len(),
        gathered.skipped
    );
    Ok(())
}

fn sim(args: Sim) -> Result<()> {
    let (lex, grammar) = args.scoring.load()?;
    let pair = SentencePair::new("cli", &args.sentence_1, &args.sentence_2, Vec::new(), None)?;
    let score = model_similarity(
        &pair,
        args.model,
        &lex,
        &grammar,
        args.scoring.model_options(),
    )?;
    println!("{score:.6}");
    Ok(())
}

fn eval(args: Eval) -> Result<()> {
    require_file(&args.dataset, "dataset")?;
    let dataset = SimilarityDataset::load(&args.dataset)?;
    let (lex, grammar) = args.scoring.load()?;
    let models = if args.model.is_empty() {
        Model::all()
    } else {
        args.model.clone()
    };
    let opts = ExperimentOptions {
        aggregation: match args.aggregation {
            Aggregation::Mean => RatingAggregation::Mean,
            Aggregation::Pooled => RatingAggregation::Pooled,
        },
        model: args.scoring.model_options(),
    };
    let report = run_experiment(&dataset, &models, &lex, &grammar, opts)?;
    if let Some(out) = &args.out {
        formats::write_atomic(out, &report.to_tsv())?;
    }
    print!("{report}");
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::BuildNouns(a) => build_nouns(a),
        Command::BuildVerb(a) => build_verb(a),
        Command::BuildAdj(a) => build_adj(a),
        Command::Sim(a) => sim(a),
        Command::Eval(a) => eval(a),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
