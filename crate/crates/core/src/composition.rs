//! Sentence meanings from word meanings.
//!
//! Nouns are vectors in N. A transitive verb is a matrix `C` over N ⊗ N and
//! the sentence `subj verb obj` means `C_ij * subj_i * obj_j` at basis pair
//! `(i, j)`. Intransitive verbs (order 1) give sentences in N and
//! ditransitive verbs (order 3) sentences in N ⊗ N ⊗ N. Smaller sentence
//! spaces embed into larger ones by tensoring with the sum of all basis
//! vectors, so sentences of different shapes remain comparable.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::pregroup::{reduce, BaseSymbol, Lexicon, Link, PregroupType};
use crate::vectorspace::{BasisRegistry, SemTensor, WeightedVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SentenceSpace {
    /// N: intransitive sentences and noun phrases.
    N,
    /// N ⊗ N: transitive sentences.
    NN,
    /// N ⊗ N ⊗ N: ditransitive sentences.
    NNN,
    /// Two-dimensional {false, true} space.
    Truth,
}

impl SentenceSpace {
    pub fn order(self) -> usize {
        match self {
            SentenceSpace::N | SentenceSpace::Truth => 1,
            SentenceSpace::NN => 2,
            SentenceSpace::NNN => 3,
        }
    }

    fn from_order(order: usize) -> Option<Self> {
        match order {
            1 => Some(SentenceSpace::N),
            2 => Some(SentenceSpace::NN),
            3 => Some(SentenceSpace::NNN),
            _ => None,
        }
    }
}

/// Basis `{false, true}` of the truth-theoretic sentence space.
pub fn truth_space() -> Arc<BasisRegistry> {
    static SPACE: OnceLock<Arc<BasisRegistry>> = OnceLock::new();
    Arc::clone(
        SPACE.get_or_init(|| {
            BasisRegistry::plain("B2", ["false", "true"]).expect("static truth basis")
        }),
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct SentenceMeaning {
    value: SemTensor,
    space: SentenceSpace,
}

impl SentenceMeaning {
    pub fn new(value: SemTensor, space: SentenceSpace) -> Result<Self> {
        if value.order() != space.order() {
            return Err(Error::OrderMismatch {
                expected: space.order(),
                found: value.order(),
            });
        }
        if space == SentenceSpace::Truth && **value.space() != *truth_space() {
            return Err(Error::SpaceMismatch {
                left: truth_space().name().to_owned(),
                right: value.space().name().to_owned(),
            });
        }
        Ok(SentenceMeaning { value, space })
    }

    pub fn from_vector(v: &WeightedVector) -> Self {
        SentenceMeaning {
            value: SemTensor::from_vector(v),
            space: SentenceSpace::N,
        }
    }

    pub fn value(&self) -> &SemTensor {
        &self.value
    }

    pub fn sentence_space(&self) -> SentenceSpace {
        self.space
    }

    pub fn into_value(self) -> SemTensor {
        self.value
    }

    /// Cosine after embedding the smaller meaning into the larger space.
    pub fn cosine(&self, other: &SentenceMeaning) -> Result<f64> {
        let (a, b) = align(self, other)?;
        a.value.cosine(&b.value)
    }
}

fn require_order(t: &SemTensor, order: usize) -> Result<()> {
    if t.order() == order {
        Ok(())
    } else {
        Err(Error::OrderMismatch {
            expected: order,
            found: t.order(),
        })
    }
}

fn check_same_space(a: &Arc<BasisRegistry>, b: &Arc<BasisRegistry>) -> Result<()> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(Error::SpaceMismatch {
            left: a.name().to_owned(),
            right: b.name().to_owned(),
        })
    }
}

/// Multiplies each verb entry by the argument weights on its axes.
fn contract(verb: &SemTensor, args: &[&WeightedVector]) -> Result<SemTensor> {
    require_order(verb, args.len())?;
    for a in args {
        check_same_space(verb.space(), a.space())?;
    }
    let entries: BTreeMap<Vec<usize>, f64> = verb
        .iter()
        .map(|(idx, c)| {
            let w = idx.iter().zip(args).fold(c, |acc, (&i, a)| acc * a.get(i));
            (idx.to_vec(), w)
        })
        .filter(|&(_, w)| w != 0.0)
        .collect();
    Ok(SemTensor::from_map(verb.space(), verb.order(), entries))
}

/// `(i, j) ↦ C_ij * subj_i * obj_j` in N ⊗ N.
pub fn compose_transitive(
    subj: &WeightedVector,
    verb: &SemTensor,
    obj: &WeightedVector,
) -> Result<SentenceMeaning> {
    Ok(SentenceMeaning {
        value: contract(verb, &[subj, obj])?,
        space: SentenceSpace::NN,
    })
}

/// `i ↦ C_i * subj_i` in N.
pub fn compose_intransitive(subj: &WeightedVector, verb: &SemTensor) -> Result<SentenceMeaning> {
    Ok(SentenceMeaning {
        value: contract(verb, &[subj])?,
        space: SentenceSpace::N,
    })
}

/// `(i, j, k) ↦ C_ijk * subj_i * obj_j * iobj_k` in N ⊗ N ⊗ N.
pub fn compose_ditransitive(
    subj: &WeightedVector,
    verb: &SemTensor,
    obj: &WeightedVector,
    iobj: &WeightedVector,
) -> Result<SentenceMeaning> {
    Ok(SentenceMeaning {
        value: contract(verb, &[subj, obj, iobj])?,
        space: SentenceSpace::NNN,
    })
}

/// Applies an adjective to a noun. An order-2 adjective maps the noun
/// through its matrix (`Σ_j C_ij noun_j`); an order-1 adjective is the
/// diagonal of such a matrix and acts elementwise.
pub fn compose_adjective(adj: &SemTensor, noun: &WeightedVector) -> Result<WeightedVector> {
    check_same_space(adj.space(), noun.space())?;
    match adj.order() {
        1 => {
            let entries = adj.iter().map(|(idx, c)| (idx[0], c * noun.get(idx[0])));
            WeightedVector::from_entries(noun.space(), entries)
        }
        2 => {
            let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
            for (idx, c) in adj.iter() {
                let x = noun.get(idx[1]);
                if x != 0.0 {
                    *acc.entry(idx[0]).or_insert(0.0) += c * x;
                }
            }
            WeightedVector::from_entries(noun.space(), acc)
        }
        found => Err(Error::OrderMismatch { expected: 1, found }),
    }
}

/// Pads one more axis with the superposition of all basis vectors.
fn pad(value: &SemTensor) -> SemTensor {
    let dim = value.space().dim();
    let order = value.order() + 1;
    let mut entries = BTreeMap::new();
    for (idx, w) in value.iter() {
        for j in 0..dim {
            let mut k = idx.to_vec();
            k.push(j);
            entries.insert(k, w);
        }
    }
    SemTensor::from_map(value.space(), order, entries)
}

fn embed_to(m: &SentenceMeaning, target: SentenceSpace) -> Result<SentenceMeaning> {
    if m.space == SentenceSpace::Truth || target == SentenceSpace::Truth {
        return Err(Error::UnsupportedPattern(
            "truth-valued meanings do not embed".into(),
        ));
    }
    if m.space.order() > target.order() {
        return Err(Error::OrderMismatch {
            expected: target.order(),
            found: m.space.order(),
        });
    }
    let mut value = m.value.clone();
    while value.order() < target.order() {
        value = pad(&value);
    }
    Ok(SentenceMeaning {
        value,
        space: target,
    })
}

/// N → N ⊗ N via `m ⊗ Σ_j n_j`. Meanings already in N ⊗ N are returned
/// unchanged.
pub fn embed_to_transitive(m: &SentenceMeaning) -> Result<SentenceMeaning> {
    embed_to(m, SentenceSpace::NN)
}

/// N or N ⊗ N → N ⊗ N ⊗ N by the same padding.
pub fn embed_to_ditransitive(m: &SentenceMeaning) -> Result<SentenceMeaning> {
    embed_to(m, SentenceSpace::NNN)
}

/// Embeds the lower-order meaning into the space of the higher-order one.
pub fn align(
    a: &SentenceMeaning,
    b: &SentenceMeaning,
) -> Result<(SentenceMeaning, SentenceMeaning)> {
    if (a.space == SentenceSpace::Truth) != (b.space == SentenceSpace::Truth) {
        return Err(Error::UnsupportedPattern(
            "cannot compare truth-valued and distributional meanings".into(),
        ));
    }
    let order = a.space.order().max(b.space.order());
    if a.space == SentenceSpace::Truth {
        return Ok((a.clone(), b.clone()));
    }
    let target = SentenceSpace::from_order(order).expect("orders are 1..=3");
    Ok((embed_to(a, target)?, embed_to(b, target)?))
}

/// Distributional vectors and relational tensors for a vocabulary, all over
/// one basis space.
#[derive(Debug, Clone)]
pub struct LexicalSemantics {
    space: Arc<BasisRegistry>,
    vectors: BTreeMap<String, WeightedVector>,
    tensors: BTreeMap<String, SemTensor>,
}

impl LexicalSemantics {
    pub fn new(space: &Arc<BasisRegistry>) -> Self {
        LexicalSemantics {
            space: Arc::clone(space),
            vectors: BTreeMap::new(),
            tensors: BTreeMap::new(),
        }
    }

    pub fn space(&self) -> &Arc<BasisRegistry> {
        &self.space
    }

    /// Distributional vector of a word (nouns, and optionally the plain
    /// co-occurrence vectors of verbs and adjectives).
    pub fn insert_vector(&mut self, word: impl Into<String>, v: WeightedVector) -> Result<()> {
        check_same_space(&self.space, v.space())?;
        self.vectors.insert(word.into(), v);
        Ok(())
    }

    /// Tensor of a relational word (verb or adjective).
    pub fn insert_tensor(&mut self, word: impl Into<String>, t: SemTensor) -> Result<()> {
        check_same_space(&self.space, t.space())?;
        self.tensors.insert(word.into(), t);
        Ok(())
    }

    pub fn vector(&self, word: &str) -> Option<&WeightedVector> {
        self.vectors.get(word)
    }

    pub fn tensor(&self, word: &str) -> Option<&SemTensor> {
        self.tensors.get(word)
    }

    pub fn vectors(&self) -> &BTreeMap<String, WeightedVector> {
        &self.vectors
    }

    pub fn tensors(&self) -> &BTreeMap<String, SemTensor> {
        &self.tensors
    }

    fn require_vector(&self, word: &str) -> Result<&WeightedVector> {
        self.vector(word)
            .ok_or_else(|| Error::MissingEntry(word.to_owned()))
    }

    fn require_tensor(
        &self,
        word: &str,
        ty: &PregroupType,
        orders: &[usize],
    ) -> Result<&SemTensor> {
        let t = self
            .tensor(word)
            .ok_or_else(|| Error::MissingEntry(word.to_owned()))?;
        if !orders.contains(&t.order()) {
            return Err(Error::ArityMismatch {
                word: word.to_owned(),
                ty: ty.to_string(),
                order: t.order(),
            });
        }
        Ok(t)
    }
}

/// Grammatical role of a word, read off its pregroup type.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Noun,
    Adjective,
    IntransitiveVerb,
    TransitiveVerb,
    DitransitiveVerb,
}

impl Role {
    pub fn of(ty: &PregroupType) -> Option<Role> {
        [
            (PregroupType::noun(), Role::Noun),
            (PregroupType::adjective(), Role::Adjective),
            (PregroupType::intransitive_verb(), Role::IntransitiveVerb),
            (PregroupType::transitive_verb(), Role::TransitiveVerb),
            (PregroupType::ditransitive_verb(), Role::DitransitiveVerb),
        ]
        .into_iter()
        .find_map(|(t, r)| (&t == ty).then_some(r))
    }
}

/// `Adj* Noun`: word indices of the adjectives (outermost first) and the head
/// noun.
#[derive(Debug, Clone)]
struct NounPhrase {
    adjectives: Vec<usize>,
    noun: usize,
}

impl NounPhrase {
    fn first_word(&self) -> usize {
        self.adjectives.first().copied().unwrap_or(self.noun)
    }
}

#[derive(Debug, Clone)]
enum Pattern {
    NounPhrase(NounPhrase),
    Intransitive(NounPhrase, usize),
    Transitive(NounPhrase, usize, NounPhrase),
    Ditransitive(NounPhrase, usize, NounPhrase, NounPhrase),
}

fn parse_np(roles: &[Role], pos: &mut usize) -> Option<NounPhrase> {
    let mut adjectives = Vec::new();
    while roles.get(*pos) == Some(&Role::Adjective) {
        adjectives.push(*pos);
        *pos += 1;
    }
    if roles.get(*pos) == Some(&Role::Noun) {
        let noun = *pos;
        *pos += 1;
        Some(NounPhrase { adjectives, noun })
    } else {
        None
    }
}

fn recognise(roles: &[Role]) -> Option<Pattern> {
    let mut pos = 0;
    let subj = parse_np(roles, &mut pos)?;
    let Some(&verb_role) = roles.get(pos) else {
        return Some(Pattern::NounPhrase(subj));
    };
    let verb = pos;
    pos += 1;
    let pattern = match verb_role {
        Role::IntransitiveVerb => Pattern::Intransitive(subj, verb),
        Role::TransitiveVerb => Pattern::Transitive(subj, verb, parse_np(roles, &mut pos)?),
        Role::DitransitiveVerb => {
            let obj = parse_np(roles, &mut pos)?;
            let iobj = parse_np(roles, &mut pos)?;
            Pattern::Ditransitive(subj, verb, obj, iobj)
        }
        _ => return None,
    };
    (pos == roles.len()).then_some(pattern)
}

/// Links the recognised pattern implies, given each word's first atom
/// offset.
fn expected_links(pattern: &Pattern, offsets: &[usize]) -> BTreeSet<Link> {
    let mut links = BTreeSet::new();
    let np_links = |np: &NounPhrase, links: &mut BTreeSet<Link>| {
        for &a in &np.adjectives {
            links.insert(Link {
                left: offsets[a] + 1,
                right: offsets[a + 1],
            });
        }
    };
    let head = |np: &NounPhrase| offsets[np.first_word()];
    match pattern {
        Pattern::NounPhrase(np) => np_links(np, &mut links),
        Pattern::Intransitive(s, v) => {
            np_links(s, &mut links);
            links.insert(Link {
                left: head(s),
                right: offsets[*v],
            });
        }
        Pattern::Transitive(s, v, o) => {
            np_links(s, &mut links);
            np_links(o, &mut links);
            links.insert(Link {
                left: head(s),
                right: offsets[*v],
            });
            links.insert(Link {
                left: offsets[*v] + 2,
                right: head(o),
            });
        }
        Pattern::Ditransitive(s, v, o, io) => {
            np_links(s, &mut links);
            np_links(o, &mut links);
            np_links(io, &mut links);
            links.insert(Link {
                left: head(s),
                right: offsets[*v],
            });
            links.insert(Link {
                left: offsets[*v] + 3,
                right: head(o),
            });
            links.insert(Link {
                left: offsets[*v] + 2,
                right: head(io),
            });
        }
    }
    links
}

fn np_meaning<S: AsRef<str>>(
    np: &NounPhrase,
    words: &[S],
    types: &[PregroupType],
    lex: &LexicalSemantics,
) -> Result<WeightedVector> {
    let mut v = lex.require_vector(words[np.noun].as_ref())?.clone();
    for &a in np.adjectives.iter().rev() {
        let adj = lex.require_tensor(words[a].as_ref(), &types[a], &[1, 2])?;
        v = compose_adjective(adj, &v)?;
    }
    Ok(v)
}

/// Types the words with `grammar`, reduces them, and composes the meaning of
/// the recognised pattern: `Adj* N`, `Adj* N V_intr`, `Adj* N V_tr Adj* N`
/// or `Adj* N V_ditr Adj* N Adj* N` (direct object first).
pub fn compose_sentence<S: AsRef<str>>(
    words: &[S],
    lex: &LexicalSemantics,
    grammar: &Lexicon,
) -> Result<SentenceMeaning> {
    let sentence = || {
        words
            .iter()
            .map(AsRef::as_ref)
            .collect::<Vec<_>>()
            .join(" ")
    };
    if words.is_empty() {
        return Err(Error::UnsupportedPattern(String::new()));
    }
    let types = grammar.assign(words)?;
    let reduction = reduce(&types);
    let s = BaseSymbol::sentence();
    let n = BaseSymbol::noun();
    if !(crate::pregroup::is_sentence(&reduction, &s)
        || crate::pregroup::is_sentence(&reduction, &n))
    {
        return Err(Error::Ungrammatical {
            sentence: sentence(),
            residual: reduction.residual.to_string(),
        });
    }

    let roles = types
        .iter()
        .map(Role::of)
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::UnsupportedPattern(sentence()))?;
    let pattern = recognise(&roles).ok_or_else(|| Error::UnsupportedPattern(sentence()))?;

    let offsets: Vec<usize> = types
        .iter()
        .scan(0, |acc, t| {
            let start = *acc;
            *acc += t.len();
            Some(start)
        })
        .collect();
    let actual: BTreeSet<Link> = reduction.links.iter().copied().collect();
    if actual != expected_links(&pattern, &offsets) {
        return Err(Error::PlanMismatch(sentence()));
    }

    let np = |p: &NounPhrase| np_meaning(p, words, &types, lex);
    let verb = |v: usize, order: usize| lex.require_tensor(words[v].as_ref(), &types[v], &[order]);
    match &pattern {
        Pattern::NounPhrase(p) => Ok(SentenceMeaning::from_vector(&np(p)?)),
        Pattern::Intransitive(s, v) => compose_intransitive(&np(s)?, verb(*v, 1)?),
        Pattern::Transitive(s, v, o) => compose_transitive(&np(s)?, verb(*v, 2)?, &np(o)?),
        Pattern::Ditransitive(s, v, o, io) => {
            compose_ditransitive(&np(s)?, verb(*v, 3)?, &np(o)?, &np(io)?)
        }
    }
}

/// Order-2 0/1 tensor over a domain of individuals: entry `(i, j)` is 1 iff
/// `(i, j)` is in the relation.
pub fn truth_theoretic_verb<'a, I>(relation: I, domain: &Arc<BasisRegistry>) -> Result<SemTensor>
where
    I: IntoIterator<Item = (&'a str, &'a str)>,
{
    let mut pairs = BTreeSet::new();
    for (a, b) in relation {
        pairs.insert(vec![domain.require(a)?, domain.require(b)?]);
    }
    SemTensor::from_entries(domain, 2, pairs.into_iter().map(|k| (k, 1.0)))
}

/// True when the meaning carries positive total mass.
pub fn truth_value(m: &SentenceMeaning) -> bool {
    m.value.mass() > 0.0
}

/// Collapses a composed sentence to `|1⟩` (true) or `|0⟩` (false).
pub fn truth_meaning(m: &SentenceMeaning) -> SentenceMeaning {
    let space = truth_space();
    let slot = usize::from(truth_value(m));
    SentenceMeaning {
        value: SemTensor::from_vector(
            &WeightedVector::basis(&space, slot).expect("two-element basis"),
        ),
        space: SentenceSpace::Truth,
    }
}
