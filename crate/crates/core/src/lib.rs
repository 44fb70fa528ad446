//! Compositional distributional sentence meaning.
//!
//! Word meanings come from corpus statistics: nouns are sparse vectors over
//! a basis space N, while verbs and adjectives are tensors built as sums of
//! Kronecker products of their arguments' vectors. A pregroup grammar types
//! every word; reducing the typed sentence yields a contraction plan, and
//! contracting the word tensors along that plan gives the sentence meaning.
//! Sentences are compared by cosine, and [`evaluation`] correlates those
//! similarities with human judgements.
//!
//! ```
//! use catsem::composition::{compose_sentence, LexicalSemantics};
//! use catsem::pregroup::{Lexicon, PregroupType};
//! use catsem::vectorspace::{BasisRegistry, SemTensor, WeightedVector};
//!
//! let space = BasisRegistry::plain("N", ["furry", "metal"]).unwrap();
//! let mut lex = LexicalSemantics::new(&space);
//! lex.insert_vector("dogs", WeightedVector::from_dense(&space, &[3.0, 0.0]).unwrap()).unwrap();
//! lex.insert_vector("cars", WeightedVector::from_dense(&space, &[0.0, 5.0]).unwrap()).unwrap();
//! let chase = SemTensor::from_dense(&space, 2, &[1.0, 4.0, 0.0, 0.0]).unwrap();
//! lex.insert_tensor("chase", chase).unwrap();
//!
//! let mut grammar = Lexicon::new();
//! grammar.insert("dogs", PregroupType::noun());
//! grammar.insert("cars", PregroupType::noun());
//! grammar.insert("chase", PregroupType::transitive_verb());
//!
//! let m = compose_sentence(&["dogs", "chase", "cars"], &lex, &grammar).unwrap();
//! assert_eq!(m.value().get(&[0, 1]), 4.0 * 3.0 * 5.0);
//! ```

pub mod composition;
pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod formats;
pub mod pregroup;
pub mod synthetic;
pub mod vectorspace;

pub use composition::{
    compose_adjective, compose_ditransitive, compose_intransitive, compose_sentence,
    compose_transitive, embed_to_ditransitive, embed_to_transitive, truth_theoretic_verb,
    LexicalSemantics, SentenceMeaning, SentenceSpace,
};
pub use corpus::{
    build_adjective_tensor, build_ditransitive_tensor, build_intransitive_tensor,
    build_verb_tensor, count_cooccurrence, count_properties, tfidf, CountAccumulator, TripleRecord,
    Weighting,
};
pub use error::{Error, Result};
pub use evaluation::{
    model_similarity, run_experiment, spearman_rho, ExperimentReport, Model, SentencePair,
    SimilarityDataset, Tag,
};
pub use pregroup::{is_sentence, reduce, Lexicon, PregroupType, ReductionResult};
pub use vectorspace::{
    cosine, inner, kronecker, kronecker3, norm, tensor_add, BasisRegistry, SemTensor,
    WeightedVector,
};
