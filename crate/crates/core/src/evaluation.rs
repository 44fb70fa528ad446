//! Disambiguation experiments: score sentence pairs under several
//! composition models and correlate the scores with human ratings.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use crate::composition::{compose_sentence, LexicalSemantics, Role, SentenceMeaning};
use crate::error::{Error, Result};
use crate::pregroup::{strip_comment, Lexicon};
use crate::vectorspace::{add, cosine, pointwise_mul, SemTensor, WeightedVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    High,
    Low,
}

impl FromStr for Tag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "HIGH" => Ok(Tag::High),
            "LOW" => Ok(Tag::Low),
            _ => Err(Error::InvalidRecord(format!("unknown tag `{s}`"))),
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tag::High => "HIGH",
            Tag::Low => "LOW",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SentencePair {
    pub id: String,
    pub sentence_1: Vec<String>,
    pub sentence_2: Vec<String>,
    /// One rating per annotator, each in `[1, 7]`.
    pub ratings: Vec<f64>,
    pub tag: Option<Tag>,
}

impl SentencePair {
    pub fn new(
        id: impl Into<String>,
        sentence_1: &str,
        sentence_2: &str,
        ratings: Vec<f64>,
        tag: Option<Tag>,
    ) -> Result<Self> {
        let split = |s: &str| s.split_whitespace().map(str::to_owned).collect::<Vec<_>>();
        let pair = SentencePair {
            id: id.into(),
            sentence_1: split(sentence_1),
            sentence_2: split(sentence_2),
            ratings,
            tag,
        };
        if pair.sentence_1.is_empty() || pair.sentence_2.is_empty() {
            return Err(Error::InvalidRecord(format!(
                "pair `{}` has an empty sentence",
                pair.id
            )));
        }
        if let Some(&r) = pair.ratings.iter().find(|r| !(1.0..=7.0).contains(*r)) {
            return Err(Error::RatingOutOfRange(r));
        }
        Ok(pair)
    }

    /// Mean annotator rating.
    pub fn gold_rating(&self) -> Option<f64> {
        (!self.ratings.is_empty())
            .then(|| self.ratings.iter().sum::<f64>() / self.ratings.len() as f64)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SimilarityDataset {
    pub pairs: Vec<SentencePair>,
}

impl SimilarityDataset {
    /// Parses `id<TAB>sentence1<TAB>sentence2<TAB>rating<TAB>tag` rows.
    /// Rows sharing an id are ratings from different annotators of one
    /// pair. Rating and tag may be left empty. A first row starting with
    /// `id<TAB>` is treated as a header.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut order: Vec<String> = Vec::new();
        let mut pairs: BTreeMap<String, SentencePair> = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = strip_comment(raw).trim_end();
            if line.trim().is_empty() || (k == 0 && line.starts_with("id\t")) {
                continue;
            }
            let f: Vec<&str> = line.split('\t').map(str::trim).collect();
            if f.len() < 3 || f.len() > 5 {
                return Err(Error::parse(origin, line_no, "expected 3 to 5 fields"));
            }
            let rating = match f.get(3).filter(|s| !s.is_empty()) {
                Some(r) => Some(
                    r.parse::<f64>()
                        .map_err(|_| Error::parse(origin, line_no, format!("bad rating `{r}`")))?,
                ),
                None => None,
            };
            let tag = match f.get(4).filter(|s| !s.is_empty()) {
                Some(t) => Some(
                    t.parse::<Tag>()
                        .map_err(|e| Error::parse(origin, line_no, e.to_string()))?,
                ),
                None => None,
            };
            let pair = SentencePair::new(f[0], f[1], f[2], rating.into_iter().collect(), tag)
                .map_err(|e| Error::parse(origin, line_no, e.to_string()))?;
            match pairs.get_mut(&pair.id) {
                Some(existing) => {
                    if existing.sentence_1 != pair.sentence_1
                        || existing.sentence_2 != pair.sentence_2
                        || (pair.tag.is_some()
                            && existing.tag.is_some()
                            && existing.tag != pair.tag)
                    {
                        return Err(Error::parse(
                            origin,
                            line_no,
                            format!("rows for `{}` disagree", pair.id),
                        ));
                    }
                    existing.ratings.extend(pair.ratings);
                    existing.tag = existing.tag.or(pair.tag);
                }
                None => {
                    order.push(pair.id.clone());
                    pairs.insert(pair.id.clone(), pair);
                }
            }
        }
        Ok(SimilarityDataset {
            pairs: order
                .into_iter()
                .filter_map(|id| pairs.remove(&id))
                .collect(),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    /// One row per annotator rating (or one bare row for unrated pairs).
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("id\tsentence1\tsentence2\trating\ttag\n");
        for p in &self.pairs {
            let tag = p.tag.map(|t| t.to_string()).unwrap_or_default();
            let ratings: Vec<String> = if p.ratings.is_empty() {
                vec![String::new()]
            } else {
                p.ratings.iter().map(|r| r.to_string()).collect()
            };
            for r in ratings {
                out.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\n",
                    p.id,
                    p.sentence_1.join(" "),
                    p.sentence_2.join(" "),
                    r,
                    tag
                ));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Model {
    /// Cosine of the grammatically composed sentence tensors.
    Categorical,
    /// Cosine of summed word vectors.
    Add,
    /// Cosine of pointwise-multiplied word vectors.
    Multiply,
    /// Cosine of `alpha * (argument vectors) + beta * (verb vector)`.
    WeightedAdd { alpha: f64, beta: f64 },
    /// Cosine of the two verbs alone.
    VerbBaseline,
}

pub const DEFAULT_ALPHA: f64 = 0.5;
pub const DEFAULT_BETA: f64 = 0.5;

impl Model {
    pub fn all() -> Vec<Model> {
        vec![
            Model::VerbBaseline,
            Model::Add,
            Model::WeightedAdd {
                alpha: DEFAULT_ALPHA,
                beta: DEFAULT_BETA,
            },
            Model::Multiply,
            Model::Categorical,
        ]
    }

    pub fn name(&self) -> String {
        match self {
            Model::Categorical => "categorical".into(),
            Model::Add => "add".into(),
            Model::Multiply => "multiply".into(),
            Model::WeightedAdd { alpha, beta }
                if *alpha == DEFAULT_ALPHA && *beta == DEFAULT_BETA =>
            {
                "weighted_add".into()
            }
            Model::WeightedAdd { alpha, beta } => format!("weighted_add:{alpha},{beta}"),
            Model::VerbBaseline => "verb_baseline".into(),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Model {
    type Err = Error;

    /// `categorical`, `add`, `multiply`, `verb_baseline` (or `baseline`),
    /// `weighted_add` (or `kintsch`), optionally `weighted_add:ALPHA,BETA`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidRecord(format!("unknown model `{s}`"));
        let (head, params) = match s.split_once(':') {
            Some((h, p)) => (h, Some(p)),
            None => (s, None),
        };
        let model = match head {
            "categorical" => Model::Categorical,
            "add" => Model::Add,
            "multiply" => Model::Multiply,
            "verb_baseline" | "baseline" => Model::VerbBaseline,
            "weighted_add" | "kintsch" => {
                let (alpha, beta) = match params {
                    None => (DEFAULT_ALPHA, DEFAULT_BETA),
                    Some(p) => {
                        let (a, b) = p.split_once(',').ok_or_else(bad)?;
                        (
                            a.trim().parse().map_err(|_| bad())?,
                            b.trim().parse().map_err(|_| bad())?,
                        )
                    }
                };
                return Ok(Model::WeightedAdd { alpha, beta });
            }
            _ => return Err(bad()),
        };
        if params.is_some() {
            return Err(bad());
        }
        Ok(model)
    }
}

/// How relational words (verbs, adjectives) are turned into vectors for the
/// vector-mixing models and the verb baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelOptions {
    /// Use a word's plain co-occurrence vector when it has one. Otherwise
    /// (or when false) an order-1 tensor is used as-is and higher orders
    /// are summed over their trailing axes.
    pub prefer_plain_vectors: bool,
}

impl Default for ModelOptions {
    fn default() -> Self {
        ModelOptions {
            prefer_plain_vectors: true,
        }
    }
}

/// Row marginal `i ↦ Σ C_i...`.
fn tensor_as_vector(t: &SemTensor) -> WeightedVector {
    WeightedVector::from_entries(t.space(), t.iter().map(|(idx, w)| (idx[0], w)))
        .expect("indices come from the same space")
}

fn word_vector(word: &str, lex: &LexicalSemantics, opts: ModelOptions) -> Result<WeightedVector> {
    let plain = lex.vector(word);
    let tensor = lex.tensor(word);
    match (plain, tensor) {
        (Some(v), _) if opts.prefer_plain_vectors => Ok(v.clone()),
        (_, Some(t)) => Ok(tensor_as_vector(t)),
        (Some(v), None) => Ok(v.clone()),
        (None, None) => Err(Error::MissingEntry(word.to_owned())),
    }
}

fn fold<F>(
    words: &[String],
    lex: &LexicalSemantics,
    opts: ModelOptions,
    op: F,
) -> Result<WeightedVector>
where
    F: Fn(&WeightedVector, &WeightedVector) -> Result<WeightedVector>,
{
    let mut vectors = words.iter().map(|w| word_vector(w, lex, opts));
    let first = vectors
        .next()
        .ok_or_else(|| Error::UnsupportedPattern(String::new()))??;
    vectors.try_fold(first, |acc, v| op(&acc, &v?))
}

fn roles(words: &[String], grammar: &Lexicon) -> Result<Vec<Option<Role>>> {
    Ok(grammar.assign(words)?.iter().map(Role::of).collect())
}

fn is_verb(role: Option<Role>) -> bool {
    matches!(
        role,
        Some(Role::IntransitiveVerb | Role::TransitiveVerb | Role::DitransitiveVerb)
    )
}

fn weighted_add(
    words: &[String],
    lex: &LexicalSemantics,
    grammar: &Lexicon,
    opts: ModelOptions,
    alpha: f64,
    beta: f64,
) -> Result<WeightedVector> {
    let roles = roles(words, grammar)?;
    let mut acc = WeightedVector::zeros(lex.space());
    for (w, r) in words.iter().zip(roles) {
        let weight = if is_verb(r) { beta } else { alpha };
        acc = add(&acc, &word_vector(w, lex, opts)?.scale(weight))?;
    }
    Ok(acc)
}

fn sentence_verb<'a>(words: &'a [String], grammar: &Lexicon) -> Result<&'a str> {
    let roles = roles(words, grammar)?;
    words
        .iter()
        .zip(roles)
        .find(|(_, r)| is_verb(*r))
        .map(|(w, _)| w.as_str())
        .ok_or_else(|| Error::UnsupportedPattern(format!("no verb in `{}`", words.join(" "))))
}

fn verb_baseline(a: &str, b: &str, lex: &LexicalSemantics, opts: ModelOptions) -> Result<f64> {
    if opts.prefer_plain_vectors {
        if let (Some(x), Some(y)) = (lex.vector(a), lex.vector(b)) {
            return cosine(x, y);
        }
    }
    match (lex.tensor(a), lex.tensor(b)) {
        (Some(x), Some(y)) => {
            let wrap = |t: &SemTensor| {
                let space = match t.order() {
                    1 => crate::composition::SentenceSpace::N,
                    2 => crate::composition::SentenceSpace::NN,
                    _ => crate::composition::SentenceSpace::NNN,
                };
                SentenceMeaning::new(t.clone(), space)
            };
            wrap(x)?.cosine(&wrap(y)?)
        }
        _ => cosine(&word_vector(a, lex, opts)?, &word_vector(b, lex, opts)?),
    }
}

/// Similarity of the two sentences of `pair` under `model`.
pub fn model_similarity(
    pair: &SentencePair,
    model: Model,
    lex: &LexicalSemantics,
    grammar: &Lexicon,
    opts: ModelOptions,
) -> Result<f64> {
    let (s1, s2) = (&pair.sentence_1, &pair.sentence_2);
    match model {
        Model::Categorical => {
            let a = compose_sentence(s1, lex, grammar)?;
            let b = compose_sentence(s2, lex, grammar)?;
            a.cosine(&b)
        }
        Model::Add => cosine(&fold(s1, lex, opts, add)?, &fold(s2, lex, opts, add)?),
        Model::Multiply => cosine(
            &fold(s1, lex, opts, pointwise_mul)?,
            &fold(s2, lex, opts, pointwise_mul)?,
        ),
        Model::WeightedAdd { alpha, beta } => cosine(
            &weighted_add(s1, lex, grammar, opts, alpha, beta)?,
            &weighted_add(s2, lex, grammar, opts, alpha, beta)?,
        ),
        Model::VerbBaseline => verb_baseline(
            sentence_verb(s1, grammar)?,
            sentence_verb(s2, grammar)?,
            lex,
            opts,
        ),
    }
}

/// Ranks starting at 1; tied values share the mean of the ranks they span.
pub fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && xs[order[end]] == xs[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1 ..= end
        let rank = (start + 1 + end) as f64 / 2.0;
        for &k in &order[start..end] {
            ranks[k] = rank;
        }
        start = end;
    }
    ranks
}

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)
}

fn is_constant(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[0] == w[1])
}

/// Spearman's ρ: Pearson correlation of average ranks.
pub fn spearman_rho(model_scores: &[f64], human_ratings: &[f64]) -> Result<f64> {
    if model_scores.len() != human_ratings.len() {
        return Err(Error::LengthMismatch(
            model_scores.len(),
            human_ratings.len(),
        ));
    }
    if model_scores.len() < 2 {
        return Err(Error::TooFewObservations {
            required: 2,
            found: model_scores.len(),
        });
    }
    if let Some(&bad) = model_scores
        .iter()
        .chain(human_ratings)
        .find(|x| !x.is_finite())
    {
        return Err(Error::NonFinite(bad));
    }
    if is_constant(model_scores) {
        return Err(Error::ConstantInput("model score"));
    }
    if is_constant(human_ratings) {
        return Err(Error::ConstantInput("rating"));
    }
    Ok(pearson(
        &average_ranks(model_scores),
        &average_ranks(human_ratings),
    ))
}

/// Mean score of HIGH pairs and of LOW pairs.
pub fn high_low_means(pairs: &[SentencePair], scores: &[f64]) -> Result<(f64, f64)> {
    if pairs.len() != scores.len() {
        return Err(Error::LengthMismatch(pairs.len(), scores.len()));
    }
    let (mut high, mut low) = (Vec::new(), Vec::new());
    for (p, &s) in pairs.iter().zip(scores) {
        match p.tag {
            Some(Tag::High) => high.push(s),
            Some(Tag::Low) => low.push(s),
            None => return Err(Error::UntaggedPair(p.id.clone())),
        }
    }
    let mean = |xs: &[f64], name| {
        if xs.is_empty() {
            Err(Error::EmptyTagClass(name))
        } else {
            Ok(xs.iter().sum::<f64>() / xs.len() as f64)
        }
    };
    Ok((mean(&high, "HIGH")?, mean(&low, "LOW")?))
}

/// How several annotator ratings of one pair enter the correlation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RatingAggregation {
    /// Correlate against the per-pair mean rating.
    #[default]
    Mean,
    /// Every annotator rating is its own observation, paired with the
    /// pair's model score.
    Pooled,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ExperimentOptions {
    pub aggregation: RatingAggregation,
    pub model: ModelOptions,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelRow {
    pub model: Model,
    /// Present when every pair is tagged and both classes are non-empty.
    pub mean_high: Option<f64>,
    pub mean_low: Option<f64>,
    pub rho: f64,
    /// Per-pair scores in dataset order.
    pub scores: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub rows: Vec<ModelRow>,
}

impl ExperimentReport {
    pub fn row(&self, model: Model) -> Option<&ModelRow> {
        self.rows.iter().find(|r| r.model == model)
    }

    pub fn to_tsv(&self) -> String {
        let opt = |x: Option<f64>| x.map(|v| format!("{v:.6}")).unwrap_or_default();
        let mut out = String::from("model\thigh\tlow\trho\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{}\t{}\t{}\t{:.6}\n",
                r.model,
                opt(r.mean_high),
                opt(r.mean_low),
                r.rho
            ));
        }
        out
    }
}

impl fmt::Display for ExperimentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let opt = |x: Option<f64>| x.map(|v| format!("{v:.2}")).unwrap_or_else(|| "-".into());
        writeln!(f, "{:<16} {:>6} {:>6} {:>6}", "Model", "High", "Low", "rho")?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<16} {:>6} {:>6} {:>6.2}",
                r.model.name(),
                opt(r.mean_high),
                opt(r.mean_low),
                r.rho
            )?;
        }
        Ok(())
    }
}

/// Scores every pair under every model and reports ρ against the gold
/// ratings plus HIGH/LOW means. Pairs are scored in parallel; results are
/// assembled in dataset order.
pub fn run_experiment(
    dataset: &SimilarityDataset,
    models: &[Model],
    lex: &LexicalSemantics,
    grammar: &Lexicon,
    opts: ExperimentOptions,
) -> Result<ExperimentReport> {
    if dataset.pairs.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if let Some(p) = dataset.pairs.iter().find(|p| p.ratings.is_empty()) {
        return Err(Error::InvalidRecord(format!(
            "pair `{}` has no rating",
            p.id
        )));
    }
    let mut rows = Vec::with_capacity(models.len());
    for &model in models {
        let scores = dataset
            .pairs
            .par_iter()
            .map(|p| model_similarity(p, model, lex, grammar, opts.model))
            .collect::<Result<Vec<f64>>>()?;
        let rho = match opts.aggregation {
            RatingAggregation::Mean => {
                let gold: Vec<f64> = dataset
                    .pairs
                    .iter()
                    .map(|p| p.gold_rating().expect("checked above"))
                    .collect();
                spearman_rho(&scores, &gold)?
            }
            RatingAggregation::Pooled => {
                let (xs, ys): (Vec<f64>, Vec<f64>) = dataset
                    .pairs
                    .iter()
                    .zip(&scores)
                    .flat_map(|(p, &s)| p.ratings.iter().map(move |&r| (s, r)))
                    .unzip();
                spearman_rho(&xs, &ys)?
            }
        };
        let means = high_low_means(&dataset.pairs, &scores).ok();
        rows.push(ModelRow {
            model,
            mean_high: means.map(|m| m.0),
            mean_low: means.map(|m| m.1),
            rho,
            scores,
        });
    }
    Ok(ExperimentReport { rows })
}
