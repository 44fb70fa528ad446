//! Corpus statistics: co-occurrence and dependency-property counts for
//! noun vectors, and Kronecker-sum construction of relational word tensors.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::vectorspace::{BasisKind, BasisRegistry, SemTensor, WeightedVector};

/// Tokens on either side of a target that count as co-occurring.
pub const DEFAULT_WINDOW: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VerbArity {
    Intransitive,
    Transitive,
    Ditransitive,
}

impl VerbArity {
    /// Order of the verb tensor: one axis per argument, subject included,
    /// except that intransitive verbs keep a single axis.
    pub fn tensor_order(self) -> usize {
        match self {
            VerbArity::Intransitive => 1,
            VerbArity::Transitive => 2,
            VerbArity::Ditransitive => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            VerbArity::Intransitive => "intransitive",
            VerbArity::Transitive => "transitive",
            VerbArity::Ditransitive => "ditransitive",
        }
    }

    pub fn from_order(order: usize) -> Option<Self> {
        match order {
            1 => Some(VerbArity::Intransitive),
            2 => Some(VerbArity::Transitive),
            3 => Some(VerbArity::Ditransitive),
            _ => None,
        }
    }
}

/// A pre-parsed verb occurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleRecord {
    pub subject: String,
    pub verb: String,
    pub object: Option<String>,
    pub indirect_object: Option<String>,
}

impl TripleRecord {
    pub fn new(
        subject: impl Into<String>,
        verb: impl Into<String>,
        object: Option<String>,
        indirect_object: Option<String>,
    ) -> Result<Self> {
        let rec = TripleRecord {
            subject: subject.into(),
            verb: verb.into(),
            object: object.filter(|o| !o.is_empty()),
            indirect_object: indirect_object.filter(|o| !o.is_empty()),
        };
        if rec.subject.is_empty() || rec.verb.is_empty() {
            return Err(Error::InvalidRecord("empty subject or verb".into()));
        }
        if rec.object.is_none() && rec.indirect_object.is_some() {
            return Err(Error::InvalidRecord(format!(
                "`{}` has an indirect object but no object",
                rec.verb
            )));
        }
        Ok(rec)
    }

    pub fn transitive(subject: &str, verb: &str, object: &str) -> Result<Self> {
        Self::new(subject, verb, Some(object.to_owned()), None)
    }

    pub fn arity(&self) -> VerbArity {
        match (&self.object, &self.indirect_object) {
            (None, _) => VerbArity::Intransitive,
            (Some(_), None) => VerbArity::Transitive,
            (Some(_), Some(_)) => VerbArity::Ditransitive,
        }
    }

    /// Arguments in tensor-axis order: subject, object, indirect object.
    pub fn arguments(&self) -> Vec<&str> {
        std::iter::once(self.subject.as_str())
            .chain(self.object.as_deref())
            .chain(self.indirect_object.as_deref())
            .collect()
    }
}

/// `adjective` modifying `argument`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjectiveRecord {
    pub adjective: String,
    pub argument: String,
}

impl AdjectiveRecord {
    pub fn new(adjective: impl Into<String>, argument: impl Into<String>) -> Result<Self> {
        let rec = AdjectiveRecord {
            adjective: adjective.into(),
            argument: argument.into(),
        };
        if rec.adjective.is_empty() || rec.argument.is_empty() {
            return Err(Error::InvalidRecord("empty adjective record".into()));
        }
        Ok(rec)
    }
}

/// Per-target basis counts plus document frequencies. Mergeable: merging
/// adds counts pointwise and adds document totals.
#[derive(Debug, Clone, PartialEq)]
pub struct CountAccumulator {
    basis: Arc<BasisRegistry>,
    counts: BTreeMap<String, BTreeMap<usize, u64>>,
    doc_frequency: BTreeMap<usize, u64>,
    doc_count: u64,
}

impl CountAccumulator {
    /// Empty accumulator with a (zero) row for every target.
    pub fn new<'a>(
        basis: &Arc<BasisRegistry>,
        targets: impl IntoIterator<Item = &'a String>,
    ) -> Self {
        CountAccumulator {
            basis: Arc::clone(basis),
            counts: targets
                .into_iter()
                .map(|t| (t.clone(), BTreeMap::new()))
                .collect(),
            doc_frequency: BTreeMap::new(),
            doc_count: 0,
        }
    }

    pub fn basis(&self) -> &Arc<BasisRegistry> {
        &self.basis
    }

    pub fn count(&self, target: &str, basis_index: usize) -> u64 {
        self.counts
            .get(target)
            .and_then(|row| row.get(&basis_index))
            .copied()
            .unwrap_or(0)
    }

    pub fn row(&self, target: &str) -> Option<&BTreeMap<usize, u64>> {
        self.counts.get(target)
    }

    pub fn targets(&self) -> impl Iterator<Item = &str> {
        self.counts.keys().map(String::as_str)
    }

    pub fn doc_frequency(&self, basis_index: usize) -> u64 {
        self.doc_frequency.get(&basis_index).copied().unwrap_or(0)
    }

    pub fn doc_count(&self) -> u64 {
        self.doc_count
    }

    /// Sum of all counts.
    pub fn total(&self) -> u64 {
        self.counts.values().flat_map(|r| r.values()).sum()
    }

    fn bump(&mut self, target: &str, basis_index: usize) {
        if let Some(row) = self.counts.get_mut(target) {
            *row.entry(basis_index).or_insert(0) += 1;
        }
    }

    fn close_document(&mut self, seen: &BTreeSet<usize>) {
        for &b in seen {
            *self.doc_frequency.entry(b).or_insert(0) += 1;
        }
        self.doc_count += 1;
    }

    pub fn merge(&mut self, other: &CountAccumulator) -> Result<()> {
        if *self.basis != *other.basis {
            return Err(Error::SpaceMismatch {
                left: self.basis.name().to_owned(),
                right: other.basis.name().to_owned(),
            });
        }
        for (target, row) in &other.counts {
            let mine = self.counts.entry(target.clone()).or_default();
            for (&b, &c) in row {
                *mine.entry(b).or_insert(0) += c;
            }
        }
        for (&b, &df) in &other.doc_frequency {
            *self.doc_frequency.entry(b).or_insert(0) += df;
        }
        self.doc_count += other.doc_count;
        Ok(())
    }

    pub fn merged(mut self, other: &CountAccumulator) -> Result<Self> {
        self.merge(other)?;
        Ok(self)
    }
}

fn count_document<S: AsRef<str>>(acc: &mut CountAccumulator, tokens: &[S], window: usize) {
    let basis_ids: Vec<Option<usize>> = tokens
        .iter()
        .map(|t| acc.basis.index_of(t.as_ref()))
        .collect();
    for (p, tok) in tokens.iter().enumerate() {
        let tok = tok.as_ref();
        if !acc.counts.contains_key(tok) {
            continue;
        }
        let lo = p.saturating_sub(window);
        let hi = (p + window).min(tokens.len().saturating_sub(1));
        for (q, id) in basis_ids.iter().enumerate().take(hi + 1).skip(lo) {
            if q == p {
                continue;
            }
            if let Some(b) = *id {
                acc.bump(tok, b);
            }
        }
    }
    let seen: BTreeSet<usize> = basis_ids.into_iter().flatten().collect();
    acc.close_document(&seen);
}

/// Counts, for every occurrence of a target, each basis word within
/// `window` tokens on either side. Windows never cross document boundaries;
/// tokens outside the basis are ignored.
pub fn count_cooccurrence<D, S>(
    documents: impl IntoIterator<Item = D>,
    targets: &BTreeSet<String>,
    basis: &Arc<BasisRegistry>,
    window: usize,
) -> Result<CountAccumulator>
where
    D: AsRef<[S]>,
    S: AsRef<str>,
{
    if window == 0 {
        return Err(Error::ZeroWindow);
    }
    let mut acc = CountAccumulator::new(basis, targets);
    for doc in documents {
        count_document(&mut acc, doc.as_ref(), window);
    }
    Ok(acc)
}

/// Parallel [`count_cooccurrence`]: documents are counted into independent
/// accumulators which are merged at the end.
pub fn count_cooccurrence_par<S>(
    documents: &[Vec<S>],
    targets: &BTreeSet<String>,
    basis: &Arc<BasisRegistry>,
    window: usize,
) -> Result<CountAccumulator>
where
    S: AsRef<str> + Sync,
{
    if window == 0 {
        return Err(Error::ZeroWindow);
    }
    documents
        .par_iter()
        .fold(
            || CountAccumulator::new(basis, targets),
            |mut acc, doc| {
                count_document(&mut acc, doc, window);
                acc
            },
        )
        .map(Ok)
        .reduce(
            || Ok(CountAccumulator::new(basis, targets)),
            |a, b| a?.merged(&b?),
        )
}

/// Counts dependency properties on a structured basis: a target's
/// `subj-V` / `obj-V` / `iobj-V` count goes up when it fills that slot of
/// verb V, and `arg-A` when adjective A modifies it. Each record counts as
/// one document for document frequencies.
pub fn count_properties(
    triples: &[TripleRecord],
    adjectives: &[AdjectiveRecord],
    targets: &BTreeSet<String>,
    basis: &Arc<BasisRegistry>,
) -> Result<CountAccumulator> {
    if basis.kind() != BasisKind::Structured {
        return Err(Error::InvalidRecord(format!(
            "property counting needs a structured basis, `{}` is plain",
            basis.name()
        )));
    }
    let mut acc = CountAccumulator::new(basis, targets);
    let record = |acc: &mut CountAccumulator, slots: &[(&str, String)]| {
        let mut seen = BTreeSet::new();
        for (word, label) in slots {
            if let Some(b) = basis.index_of(label) {
                acc.bump(word, b);
                seen.insert(b);
            }
        }
        acc.close_document(&seen);
    };
    for t in triples {
        let mut slots = vec![(t.subject.as_str(), format!("subj-{}", t.verb))];
        if let Some(o) = &t.object {
            slots.push((o.as_str(), format!("obj-{}", t.verb)));
        }
        if let Some(io) = &t.indirect_object {
            slots.push((io.as_str(), format!("iobj-{}", t.verb)));
        }
        record(&mut acc, &slots);
    }
    for a in adjectives {
        record(
            &mut acc,
            &[(a.argument.as_str(), format!("arg-{}", a.adjective))],
        );
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Weighting {
    Raw,
    #[default]
    TfIdf,
}

impl std::str::FromStr for Weighting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(Weighting::Raw),
            "tfidf" => Ok(Weighting::TfIdf),
            other => Err(Error::InvalidRecord(format!("unknown weighting `{other}`"))),
        }
    }
}

impl Weighting {
    pub fn apply(self, acc: &CountAccumulator) -> Result<BTreeMap<String, WeightedVector>> {
        match self {
            Weighting::Raw => Ok(raw_vectors(acc)),
            Weighting::TfIdf => tfidf(acc),
        }
    }
}

/// Counts as weights.
pub fn raw_vectors(acc: &CountAccumulator) -> BTreeMap<String, WeightedVector> {
    acc.counts
        .iter()
        .map(|(t, row)| {
            let entries: BTreeMap<usize, f64> = row.iter().map(|(&b, &c)| (b, c as f64)).collect();
            (t.clone(), vector_from_row(&acc.basis, entries))
        })
        .collect()
}

/// `count(t, b) * ln(doc_count / df(b))`; bases that never occur get 0.
pub fn tfidf(acc: &CountAccumulator) -> Result<BTreeMap<String, WeightedVector>> {
    if acc.doc_count == 0 {
        return Err(Error::NoDocuments);
    }
    let n = acc.doc_count as f64;
    let idf = |b: usize| match acc.doc_frequency(b) {
        0 => 0.0,
        df => (n / df as f64).ln(),
    };
    Ok(acc
        .counts
        .iter()
        .map(|(t, row)| {
            let entries = row.iter().map(|(&b, &c)| (b, c as f64 * idf(b))).collect();
            (t.clone(), vector_from_row(&acc.basis, entries))
        })
        .collect())
}

fn vector_from_row(space: &Arc<BasisRegistry>, entries: BTreeMap<usize, f64>) -> WeightedVector {
    WeightedVector::from_entries(space, entries).expect("counts are finite and in range")
}

fn sum_products<'a, I>(
    space: &Arc<BasisRegistry>,
    order: usize,
    occurrences: I,
) -> Result<SemTensor>
where
    I: IntoIterator<Item = Vec<&'a WeightedVector>>,
{
    let mut entries: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    for args in occurrences {
        debug_assert_eq!(args.len(), order);
        for v in &args {
            if **v.space() != **space {
                return Err(Error::SpaceMismatch {
                    left: space.name().to_owned(),
                    right: v.space().name().to_owned(),
                });
            }
        }
        let mut partial: Vec<(Vec<usize>, f64)> = vec![(Vec::with_capacity(order), 1.0)];
        for v in &args {
            partial = partial
                .iter()
                .flat_map(|(idx, w)| {
                    v.iter().map(move |(i, x)| {
                        let mut idx = idx.clone();
                        idx.push(i);
                        (idx, w * x)
                    })
                })
                .collect();
        }
        for (idx, w) in partial {
            *entries.entry(idx).or_insert(0.0) += w;
        }
    }
    entries.retain(|_, w| *w != 0.0);
    Ok(SemTensor::from_map(space, order, entries))
}

/// Σ_k subj_k ⊗ obj_k.
pub fn build_verb_tensor(
    space: &Arc<BasisRegistry>,
    occurrences: &[(WeightedVector, WeightedVector)],
) -> Result<SemTensor> {
    sum_products(space, 2, occurrences.iter().map(|(s, o)| vec![s, o]))
}

/// Σ_k subj_k as an order-1 tensor.
pub fn build_intransitive_tensor(
    space: &Arc<BasisRegistry>,
    subjects: &[WeightedVector],
) -> Result<SemTensor> {
    sum_products(space, 1, subjects.iter().map(|s| vec![s]))
}

/// Σ_k arg_k over the nouns an adjective modifies, as an order-1 (diagonal)
/// tensor.
pub fn build_adjective_tensor(
    space: &Arc<BasisRegistry>,
    arguments: &[WeightedVector],
) -> Result<SemTensor> {
    build_intransitive_tensor(space, arguments)
}

/// Σ_k subj_k ⊗ obj_k ⊗ iobj_k.
pub fn build_ditransitive_tensor(
    space: &Arc<BasisRegistry>,
    occurrences: &[(WeightedVector, WeightedVector, WeightedVector)],
) -> Result<SemTensor> {
    sum_products(space, 3, occurrences.iter().map(|(s, o, i)| vec![s, o, i]))
}

/// Argument vectors of one verb's occurrences with a given arity.
#[derive(Debug, Clone, Default)]
pub struct Gathered {
    /// One entry per usable occurrence, arguments in tensor-axis order.
    pub arguments: Vec<Vec<WeightedVector>>,
    /// Occurrences of the word with the requested arity.
    pub matched: usize,
    /// Matched occurrences dropped because an argument has no vector.
    pub skipped: usize,
}

pub fn gather_verb_occurrences(
    triples: &[TripleRecord],
    verb: &str,
    arity: VerbArity,
    nouns: &BTreeMap<String, WeightedVector>,
) -> Gathered {
    let mut out = Gathered::default();
    for t in triples
        .iter()
        .filter(|t| t.verb == verb && t.arity() == arity)
    {
        out.matched += 1;
        let args: Option<Vec<WeightedVector>> = t
            .arguments()
            .iter()
            .map(|a| nouns.get(*a).cloned())
            .collect();
        match args {
            Some(args) => out.arguments.push(args),
            None => out.skipped += 1,
        }
    }
    out
}

pub fn gather_adjective_arguments(
    records: &[AdjectiveRecord],
    adjective: &str,
    nouns: &BTreeMap<String, WeightedVector>,
) -> Gathered {
    let mut out = Gathered::default();
    for r in records.iter().filter(|r| r.adjective == adjective) {
        out.matched += 1;
        match nouns.get(&r.argument) {
            Some(v) => out.arguments.push(vec![v.clone()]),
            None => out.skipped += 1,
        }
    }
    out
}

/// Builds the tensor of the matching order from gathered occurrences.
pub fn build_from_gathered(
    space: &Arc<BasisRegistry>,
    arity: VerbArity,
    gathered: &Gathered,
) -> Result<SemTensor> {
    sum_products(
        space,
        arity.tensor_order(),
        gathered.arguments.iter().map(|args| args.iter().collect()),
    )
}
