//! Fixtures and independent oracles shared by the integration tests and the
//! acceptance harness. Oracles work on plain `Vec<f64>` with explicit loops
//! and never call into the library's arithmetic.

#![allow(dead_code, clippy::needless_range_loop)]

pub mod props;

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use catsem::pregroup::{AtomicType, PregroupType};
use catsem::vectorspace::{BasisRegistry, SemTensor, WeightedVector};

pub const BNC_BASIS: [&str; 4] = ["far", "room", "scientific", "elect"];

/// Sample noun vectors, one column per noun of the published table.
pub const BNC_NOUNS: [(&str, [f64; 4]); 4] = [
    ("table", [6.6, 27.0, 0.0, 0.0]),
    ("map", [5.6, 7.4, 5.4, 0.0]),
    ("result", [7.0, 0.99, 13.0, 4.2]),
    ("location", [5.9, 7.3, 6.1, 0.0]),
];

/// Subject, object.
pub const SHOW_SENTENCES: [(&str, &str); 2] = [("map", "location"), ("table", "result")];

/// The published matrix of `show`; rows are subject bases.
pub const SHOW_PRINTED: [[f64; 4]; 4] = [
    [79.24, 47.41, 119.96, 27.72],
    [232.66, 80.75, 396.14, 113.2],
    [32.94, 31.86, 32.94, 0.0],
    [0.0, 0.0, 0.0, 0.0],
];

/// Cells where the printed matrix disagrees with its own inputs.
pub const SHOW_MISPRINTS: [(usize, usize); 3] = [(1, 3), (2, 0), (2, 1)];

pub const TOY_BASIS: [&str; 5] = [
    "arg-fluffy",
    "arg-ferocious",
    "obj-buys",
    "arg-shrewd",
    "arg-valuable",
];

pub const TOY_NOUNS: [(&str, [f64; 5]); 5] = [
    ("bankers", [0.0, 4.0, 0.0, 6.0, 0.0]),
    ("cats", [7.0, 1.0, 4.0, 3.0, 1.0]),
    ("dogs", [3.0, 6.0, 2.0, 1.0, 2.0]),
    ("stock", [0.0, 0.0, 7.0, 0.0, 8.0]),
    ("kittens", [2.0, 0.0, 0.0, 1.0, 0.0]),
];

pub const TOY_CHASE: [[f64; 5]; 5] = [
    [1.0, 0.0, 0.0, 0.0, 0.0],
    [7.0, 1.0, 2.0, 3.0, 1.0],
    [0.0, 0.0, 0.0, 0.0, 0.0],
    [2.0, 0.0, 1.0, 0.0, 1.0],
    [1.0, 0.0, 0.0, 0.0, 0.0],
];

pub const TOY_FLUFFY: [f64; 5] = [9.0, 3.0, 4.0, 2.0, 2.0];

pub fn bnc_space() -> Arc<BasisRegistry> {
    BasisRegistry::plain("N", BNC_BASIS).unwrap()
}

pub fn toy_space() -> Arc<BasisRegistry> {
    BasisRegistry::structured("N", TOY_BASIS).unwrap()
}

pub fn bnc_noun(word: &str) -> [f64; 4] {
    BNC_NOUNS.iter().find(|(w, _)| *w == word).unwrap().1
}

pub fn toy_noun(word: &str) -> [f64; 5] {
    TOY_NOUNS.iter().find(|(w, _)| *w == word).unwrap().1
}

pub fn vector(space: &Arc<BasisRegistry>, dense: &[f64]) -> WeightedVector {
    WeightedVector::from_dense(space, dense).unwrap()
}

/// Verb matrix by explicit loops over the sentences.
pub fn show_oracle() -> [[f64; 4]; 4] {
    let mut c = [[0.0; 4]; 4];
    for (subj, obj) in SHOW_SENTENCES {
        let (s, o) = (bnc_noun(subj), bnc_noun(obj));
        for i in 0..4 {
            for j in 0..4 {
                c[i][j] += s[i] * o[j];
            }
        }
    }
    c
}

/// `Σ_itj C_itj <subj|n_i> s_t <n_j|obj>` with the verb lifted to
/// `C_itj = C_ij` when `s_t = n_i ⊗ n_j` and 0 otherwise. Returns the
/// sentence vector indexed by `t = (a, b)`.
pub fn toy_sentence_oracle(c: &[[f64; 5]; 5], subj: &[f64; 5], obj: &[f64; 5]) -> Vec<Vec<f64>> {
    let lifted = |i: usize, a: usize, b: usize, j: usize| {
        if i == a && j == b {
            c[i][j]
        } else {
            0.0
        }
    };
    let mut out = vec![vec![0.0; 5]; 5];
    for i in 0..5 {
        for a in 0..5 {
            for b in 0..5 {
                for j in 0..5 {
                    out[a][b] += lifted(i, a, b, j) * subj[i] * obj[j];
                }
            }
        }
    }
    out
}

pub fn dense_cosine(a: &[f64], b: &[f64]) -> f64 {
    let mut dot = 0.0;
    let mut na = 0.0;
    let mut nb = 0.0;
    for (x, y) in a.iter().zip(b) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na.sqrt() * nb.sqrt())
    }
}

/// Ranks from counting: `1 + #smaller + (#equal - 1) / 2`.
pub fn rank_oracle(xs: &[f64]) -> Vec<f64> {
    xs.iter()
        .map(|x| {
            let smaller = xs.iter().filter(|y| *y < x).count() as f64;
            let equal = xs.iter().filter(|y| *y == x).count() as f64;
            1.0 + smaller + (equal - 1.0) / 2.0
        })
        .collect()
}

pub fn pearson_oracle(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (x, y) in a.iter().zip(b) {
        cov += (x - ma) * (y - mb);
        va += (x - ma) * (x - ma);
        vb += (y - mb) * (y - mb);
    }
    cov / (va.sqrt() * vb.sqrt())
}

pub fn spearman_oracle(a: &[f64], b: &[f64]) -> f64 {
    pearson_oracle(&rank_oracle(a), &rank_oracle(b))
}

/// Dense row-major copy of a tensor, by probing every index.
pub fn dense_tensor(t: &SemTensor) -> Vec<f64> {
    let dim = t.space().dim();
    let n = dim.pow(t.order() as u32);
    (0..n)
        .map(|mut flat| {
            let mut idx = vec![0; t.order()];
            for k in (0..t.order()).rev() {
                idx[k] = flat % dim;
                flat /= dim;
            }
            t.get(&idx)
        })
        .collect()
}

/// An atom as `(base, adjoint order)`.
pub type Atom = (String, i32);

pub fn atoms(types: &[PregroupType]) -> Vec<Atom> {
    types
        .iter()
        .flat_map(|t| t.atoms().iter())
        .map(|a: &AtomicType| (a.base.as_str().to_owned(), a.adjoint_order))
        .collect()
}

/// Every irreducible string reachable by cancelling any adjacent
/// `x^(z) x^(z+1)` pair, in any order.
pub struct CancellationOracle {
    memo: HashMap<Vec<Atom>, BTreeSet<Vec<Atom>>>,
}

impl CancellationOracle {
    pub fn new() -> Self {
        CancellationOracle {
            memo: HashMap::new(),
        }
    }

    pub fn normal_forms(&mut self, s: &[Atom]) -> BTreeSet<Vec<Atom>> {
        if let Some(hit) = self.memo.get(s) {
            return hit.clone();
        }
        let mut out = BTreeSet::new();
        for k in 0..s.len().saturating_sub(1) {
            let (a, b) = (&s[k], &s[k + 1]);
            if a.0 == b.0 && b.1 == a.1 + 1 {
                let mut rest = s[..k].to_vec();
                rest.extend_from_slice(&s[k + 2..]);
                out.extend(self.normal_forms(&rest));
            }
        }
        if out.is_empty() {
            out.insert(s.to_vec());
        }
        self.memo.insert(s.to_vec(), out.clone());
        out
    }
}

pub fn plain(base: &str) -> Vec<Atom> {
    vec![(base.to_owned(), 0)]
}

/// The five standard word classes with their types.
pub fn standard_classes() -> Vec<(&'static str, PregroupType)> {
    vec![
        ("noun", PregroupType::noun()),
        ("intransitive", PregroupType::intransitive_verb()),
        ("transitive", PregroupType::transitive_verb()),
        ("ditransitive", PregroupType::ditransitive_verb()),
        ("adjective", PregroupType::adjective()),
    ]
}

/// Recogniser for the phrase shapes the grammar is meant to cover, written
/// directly over class names: `NP = adjective* noun`, and a string is either
/// an NP or `NP verb` with one, two or three NPs for the verb's valency.
pub fn is_covered_phrase(classes: &[&str]) -> bool {
    fn nps(classes: &[&str]) -> Option<usize> {
        // Number of complete NPs if `classes` splits into them exactly.
        let mut count = 0;
        let mut in_np = false;
        for c in classes {
            match *c {
                "adjective" => in_np = true,
                "noun" => {
                    count += 1;
                    in_np = false;
                }
                _ => return None,
            }
        }
        (!in_np).then_some(count)
    }
    if nps(classes) == Some(1) {
        return true;
    }
    let Some(v) = classes
        .iter()
        .position(|c| matches!(*c, "intransitive" | "transitive" | "ditransitive"))
    else {
        return false;
    };
    let objects = match classes[v] {
        "intransitive" => 0,
        "transitive" => 1,
        _ => 2,
    };
    nps(&classes[..v]) == Some(1) && nps(&classes[v + 1..]) == Some(objects)
}
