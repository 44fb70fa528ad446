//! Seeded generator for a two-sense verb disambiguation benchmark.
//!
//! Each ambiguous verb `v{k}` has two senses, paraphrased by landmark verbs
//! `a{k}` and `b{k}`. Sense A relates subjects from noun cluster `X_k` to
//! objects from cluster `Y_k`; sense B runs the other way round, with `Y_k`
//! nouns as subjects and `X_k` nouns as objects. Nouns get their
//! distributional profile from description documents drawing on
//! cluster-specific context words, with some noise from a shared pool of
//! general words. Verb usages appear as short documents of the subject, verb
//! and object padded with general words.
//!
//! Sentence pairs put `subj v{k} obj` next to the same arguments with a
//! landmark verb: the landmark matching the arguments' sense is rated 7
//! (HIGH), the other 1 (LOW). Both senses contribute the same number of
//! contexts, so a model that only sees verbs cannot rank the pairs.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::composition::LexicalSemantics;
use crate::corpus::{
    build_from_gathered, count_cooccurrence, gather_verb_occurrences, TripleRecord, VerbArity,
    Weighting,
};
use crate::error::Result;
use crate::evaluation::{SentencePair, SimilarityDataset, Tag};
use crate::formats;
use crate::pregroup::{Lexicon, PregroupType};
use crate::vectorspace::BasisRegistry;

#[derive(Debug, Clone)]
pub struct TwoSenseConfig {
    pub seed: u64,
    pub verbs: usize,
    pub nouns_per_cluster: usize,
    pub contexts_per_cluster: usize,
    pub general_words: usize,
    pub descriptions_per_noun: usize,
    pub words_per_description: usize,
    /// Probability that a description word comes from the general pool.
    pub noise: f64,
    /// Distinct argument pairs per sense turned into sentence pairs.
    pub contexts_per_sense: usize,
}

impl Default for TwoSenseConfig {
    fn default() -> Self {
        TwoSenseConfig {
            seed: 7,
            verbs: 3,
            nouns_per_cluster: 4,
            contexts_per_cluster: 6,
            general_words: 8,
            descriptions_per_noun: 6,
            words_per_description: 5,
            noise: 0.2,
            contexts_per_sense: 6,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TwoSenseBenchmark {
    pub documents: Vec<Vec<String>>,
    pub basis: Arc<BasisRegistry>,
    pub triples: Vec<TripleRecord>,
    pub grammar: Lexicon,
    pub dataset: SimilarityDataset,
}

struct Cluster {
    nouns: Vec<String>,
    contexts: Vec<String>,
}

impl TwoSenseBenchmark {
    pub fn generate(cfg: &TwoSenseConfig) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let general: Vec<String> = (0..cfg.general_words).map(|j| format!("g{j}")).collect();
        let cluster = |side: char, k: usize| Cluster {
            nouns: (0..cfg.nouns_per_cluster)
                .map(|i| format!("{side}{k}n{i}"))
                .collect(),
            contexts: (0..cfg.contexts_per_cluster)
                .map(|j| format!("{side}{k}c{j}"))
                .collect(),
        };

        let mut documents = Vec::new();
        let mut triples = Vec::new();
        let mut grammar = Lexicon::new();
        let mut basis_labels: Vec<String> = general.clone();
        let mut pairs = Vec::new();

        for k in 0..cfg.verbs {
            let (xs, ys) = (cluster('x', k), cluster('y', k));
            let (target, land_a, land_b) = (format!("v{k}"), format!("a{k}"), format!("b{k}"));
            for verb in [&target, &land_a, &land_b] {
                grammar.insert(verb.clone(), PregroupType::transitive_verb());
            }
            for c in [&xs, &ys] {
                basis_labels.extend(c.contexts.iter().cloned());
                for noun in &c.nouns {
                    grammar.insert(noun.clone(), PregroupType::noun());
                    for _ in 0..cfg.descriptions_per_noun {
                        let mut doc = vec![noun.clone()];
                        for _ in 0..cfg.words_per_description {
                            let pool = if rng.random_bool(cfg.noise) {
                                &general
                            } else {
                                &c.contexts
                            };
                            doc.push(pool.choose(&mut rng).expect("non-empty pool").clone());
                        }
                        documents.push(doc);
                    }
                }
            }

            let mut sense_a = Vec::new();
            let mut sense_b = Vec::new();
            for x in &xs.nouns {
                for y in &ys.nouns {
                    sense_a.push((x.clone(), y.clone()));
                    sense_b.push((y.clone(), x.clone()));
                }
            }
            let mut usage = |subj: &str, verb: &str, obj: &str, rng: &mut ChaCha8Rng| {
                for _ in 0..rng.random_range(1..=2) {
                    triples.push(TripleRecord::transitive(subj, verb, obj).expect("non-empty"));
                    let mut doc = vec![subj.to_owned(), verb.to_owned(), obj.to_owned()];
                    for _ in 0..2 {
                        doc.push(general.choose(rng).expect("non-empty pool").clone());
                    }
                    documents.push(doc);
                }
            };
            for (s, o) in &sense_a {
                usage(s, &target, o, &mut rng);
                usage(s, &land_a, o, &mut rng);
            }
            for (s, o) in &sense_b {
                usage(s, &target, o, &mut rng);
                usage(s, &land_b, o, &mut rng);
            }

            sense_a.shuffle(&mut rng);
            sense_b.shuffle(&mut rng);
            let n = cfg.contexts_per_sense;
            let contexts = sense_a
                .iter()
                .take(n)
                .map(|c| (c, &land_a, &land_b))
                .chain(sense_b.iter().take(n).map(|c| (c, &land_b, &land_a)));
            for (c, ((s, o), same, other)) in contexts.enumerate() {
                let original = format!("{s} {target} {o}");
                for (landmark, rating, tag) in [(same, 7.0, Tag::High), (other, 1.0, Tag::Low)] {
                    pairs.push(
                        SentencePair::new(
                            format!("{target}-{c}-{tag}"),
                            &original,
                            &format!("{s} {landmark} {o}"),
                            vec![rating],
                            Some(tag),
                        )
                        .expect("well-formed pair"),
                    );
                }
            }
        }

        TwoSenseBenchmark {
            documents,
            basis: BasisRegistry::plain("N", basis_labels).expect("distinct labels"),
            triples,
            grammar,
            dataset: SimilarityDataset { pairs },
        }
    }

    /// Plain vectors for every lexicon word from the documents, and verb
    /// tensors as Kronecker sums of the noun vectors of their triples.
    pub fn semantics(&self, window: usize, weighting: Weighting) -> Result<LexicalSemantics> {
        let targets: BTreeSet<String> = self.grammar.iter().map(|(w, _)| w.to_owned()).collect();
        let acc = count_cooccurrence(&self.documents, &targets, &self.basis, window)?;
        let vectors = weighting.apply(&acc)?;
        let noun_type = PregroupType::noun();
        let nouns: BTreeMap<String, _> = vectors
            .iter()
            .filter(|(w, _)| {
                self.grammar
                    .types(w)
                    .is_some_and(|t| t.contains(&noun_type))
            })
            .map(|(w, v)| (w.clone(), v.clone()))
            .collect();
        let mut lex = LexicalSemantics::new(&self.basis);
        for (w, v) in vectors {
            lex.insert_vector(w, v)?;
        }
        let verb_type = PregroupType::transitive_verb();
        for (word, types) in self.grammar.iter() {
            if types.contains(&verb_type) {
                let g = gather_verb_occurrences(&self.triples, word, VerbArity::Transitive, &nouns);
                lex.insert_tensor(
                    word,
                    build_from_gathered(&self.basis, VerbArity::Transitive, &g)?,
                )?;
            }
        }
        Ok(lex)
    }

    /// Writes `corpus.txt`, `basis.txt`, `triples.tsv`, `lexicon.tsv` and
    /// `dataset.tsv` into `dir`.
    pub fn write_files(&self, dir: &Path) -> Result<()> {
        let corpus: String = self.documents.iter().map(|d| d.join(" ") + "\n").collect();
        formats::write_atomic(&dir.join("corpus.txt"), &corpus)?;
        formats::write_atomic(&dir.join("basis.txt"), &formats::format_basis(&self.basis))?;
        formats::write_atomic(
            &dir.join("triples.tsv"),
            &formats::format_triples(&self.triples),
        )?;
        let lexicon: String = self
            .grammar
            .iter()
            .flat_map(|(w, ts)| ts.iter().map(move |t| format!("{w}\t{t}\n")))
            .collect();
        formats::write_atomic(&dir.join("lexicon.tsv"), &lexicon)?;
        formats::write_atomic(&dir.join("dataset.tsv"), &self.dataset.to_tsv())
    }
}
