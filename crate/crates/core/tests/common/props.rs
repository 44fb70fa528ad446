//! Property checks run through an explicit proptest runner, so the same
//! checks serve `#[test]` functions and the acceptance report.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRng, TestRunner};

use catsem::composition::{
    compose_adjective, compose_intransitive, compose_transitive, embed_to_ditransitive,
    embed_to_transitive, SentenceMeaning, SentenceSpace,
};
use catsem::corpus::{build_verb_tensor, count_cooccurrence, count_cooccurrence_par};
use catsem::evaluation::{average_ranks, spearman_rho};
use catsem::vectorspace::{
    add, cosine, inner, kronecker, kronecker3, norm, pointwise_mul, BasisRegistry, SemTensor,
    WeightedVector,
};
use catsem::Error;

use super::{dense_cosine, dense_tensor, rank_oracle, spearman_oracle};

pub const CASES: u32 = 1000;
pub const MAX_DIM: usize = 8;
const TOL: f64 = 1e-12;

type Check = std::result::Result<(), TestCaseError>;

pub fn run<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Check) -> Result<(), String> {
    let config = Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    };
    let rng = TestRng::deterministic_rng(config.rng_algorithm);
    TestRunner::new_with_rng(config, rng)
        .run(&strategy, test)
        .map_err(|e| e.to_string())
}

pub fn space(dim: usize) -> Arc<BasisRegistry> {
    BasisRegistry::plain("N", (0..dim).map(|i| format!("b{i}"))).unwrap()
}

fn weight() -> impl Strategy<Value = f64> {
    prop_oneof![2 => Just(0.0), 3 => -10.0..10.0f64, 1 => (-5i32..=5).prop_map(f64::from)]
}

/// `k` sparse dense-encoded vectors of a shared dimension.
pub fn vectors(k: usize) -> impl Strategy<Value = (usize, Vec<Vec<f64>>)> {
    (1..=MAX_DIM).prop_flat_map(move |dim| {
        (
            Just(dim),
            prop::collection::vec(prop::collection::vec(weight(), dim), k),
        )
    })
}

fn wv(s: &Arc<BasisRegistry>, d: &[f64]) -> WeightedVector {
    WeightedVector::from_dense(s, d).unwrap()
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= TOL * scale.max(f64::MIN_POSITIVE) || a == b
}

fn all_close(lhs: &[f64], rhs: &[f64], scale: &[f64]) -> Check {
    prop_assert_eq!(lhs.len(), rhs.len());
    for k in 0..lhs.len() {
        prop_assert!(
            close(lhs[k], rhs[k], scale[k]),
            "entry {}: {} vs {} (scale {})",
            k,
            lhs[k],
            rhs[k],
            scale[k]
        );
    }
    Ok(())
}

fn lin(a: f64, u: &[f64], b: f64, v: &[f64]) -> Vec<f64> {
    u.iter().zip(v).map(|(x, y)| a * x + b * y).collect()
}

fn abs_lin(a: f64, u: &[f64], b: f64, v: &[f64]) -> Vec<f64> {
    u.iter()
        .zip(v)
        .map(|(x, y)| (a * x).abs() + (b * y).abs())
        .collect()
}

fn outer(u: &[f64], v: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(u.len() * v.len());
    for x in u {
        for y in v {
            out.push(x * y);
        }
    }
    out
}

fn coeff() -> impl Strategy<Value = f64> {
    -5.0..5.0f64
}

/// Cosine lies in [-1, 1], matches the dense formula, and ignores positive
/// rescaling of either argument.
pub fn cosine_bounds_and_scale_invariance() -> Result<(), String> {
    run(
        (vectors(2), 0.01..100.0f64, 0.01..100.0f64),
        |((dim, vs), a, b)| {
            let s = space(dim);
            let (u, v) = (wv(&s, &vs[0]), wv(&s, &vs[1]));
            let c = cosine(&u, &v).unwrap();
            prop_assert!((-1.0..=1.0).contains(&c), "cosine {} out of range", c);
            prop_assert!(close(c, dense_cosine(&vs[0], &vs[1]), 1.0));
            let scaled = cosine(&u.scale(a), &v.scale(b)).unwrap();
            prop_assert!(close(c, scaled, 1.0), "{} vs {}", c, scaled);
            Ok(())
        },
    )
}

/// `(au + bv) ⊗ w = a(u ⊗ w) + b(v ⊗ w)` and likewise in the second slot.
pub fn kronecker_bilinearity() -> Result<(), String> {
    run((vectors(3), coeff(), coeff()), |((dim, vs), a, b)| {
        let s = space(dim);
        let (u, v, w) = (&vs[0], &vs[1], &vs[2]);
        let (su, sv, sw) = (wv(&s, u), wv(&s, v), wv(&s, w));
        let mix = add(&su.scale(a), &sv.scale(b)).unwrap();

        let left = dense_tensor(&kronecker(&mix, &sw).unwrap());
        let parts = dense_tensor(
            &catsem::tensor_add(
                &kronecker(&su, &sw).unwrap().scale(a),
                &kronecker(&sv, &sw).unwrap().scale(b),
            )
            .unwrap(),
        );
        let scale = outer(
            &abs_lin(a, u, b, v),
            &w.iter().map(|x| x.abs()).collect::<Vec<_>>(),
        );
        all_close(&left, &parts, &scale)?;
        all_close(&left, &outer(&lin(a, u, b, v), w), &scale)?;

        let right = dense_tensor(&kronecker(&sw, &mix).unwrap());
        let parts = dense_tensor(
            &catsem::tensor_add(
                &kronecker(&sw, &su).unwrap().scale(a),
                &kronecker(&sw, &sv).unwrap().scale(b),
            )
            .unwrap(),
        );
        let scale = outer(
            &w.iter().map(|x| x.abs()).collect::<Vec<_>>(),
            &abs_lin(a, u, b, v),
        );
        all_close(&right, &parts, &scale)
    })
}

/// `|u ⊗ v| = |u| |v|`, also for three factors.
pub fn kronecker_norm_multiplicativity() -> Result<(), String> {
    run(vectors(3), |(dim, vs)| {
        let s = space(dim);
        let (u, v, w) = (wv(&s, &vs[0]), wv(&s, &vs[1]), wv(&s, &vs[2]));
        let expected = norm(&u) * norm(&v);
        let got = kronecker(&u, &v).unwrap().norm();
        prop_assert!(close(got, expected, expected), "{} vs {}", got, expected);
        let expected = expected * norm(&w);
        let got = kronecker3(&u, &v, &w).unwrap().norm();
        prop_assert!(close(got, expected, expected), "{} vs {}", got, expected);
        Ok(())
    })
}

fn matrix(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(weight(), dim * dim)
}

/// Sentence meanings are linear in each argument and in the verb, and match
/// `C_ij s_i o_j` entrywise.
pub fn composition_bilinearity() -> Result<(), String> {
    let strategy = (vectors(3), coeff(), coeff()).prop_flat_map(|(vs, a, b)| {
        let dim = vs.0;
        (Just(vs), Just(a), Just(b), matrix(dim), matrix(dim))
    });
    run(strategy, |((dim, vs), a, b, c1, c2)| {
        let s = space(dim);
        let (x, y, o) = (&vs[0], &vs[1], &vs[2]);
        let (sx, sy, so) = (wv(&s, x), wv(&s, y), wv(&s, o));
        let verb = SemTensor::from_dense(&s, 2, &c1).unwrap();
        let verb2 = SemTensor::from_dense(&s, 2, &c2).unwrap();
        let mix = add(&sx.scale(a), &sy.scale(b)).unwrap();
        let abs_o: Vec<f64> = o.iter().map(|v| v.abs()).collect();
        let weighted_scale = |m: &[f64], scale: Vec<f64>| -> Vec<f64> {
            m.iter().zip(scale).map(|(c, s)| c.abs() * s).collect()
        };

        // subject slot
        let lhs = dense_tensor(compose_transitive(&mix, &verb, &so).unwrap().value());
        let rhs = lin(
            a,
            &dense_tensor(compose_transitive(&sx, &verb, &so).unwrap().value()),
            b,
            &dense_tensor(compose_transitive(&sy, &verb, &so).unwrap().value()),
        );
        let scale = weighted_scale(&c1, outer(&abs_lin(a, x, b, y), &abs_o));
        all_close(&lhs, &rhs, &scale)?;
        let oracle: Vec<f64> = (0..dim * dim)
            .map(|k| c1[k] * (a * x[k / dim] + b * y[k / dim]) * o[k % dim])
            .collect();
        all_close(&lhs, &oracle, &scale)?;

        // object slot
        let lhs = dense_tensor(compose_transitive(&so, &verb, &mix).unwrap().value());
        let rhs = lin(
            a,
            &dense_tensor(compose_transitive(&so, &verb, &sx).unwrap().value()),
            b,
            &dense_tensor(compose_transitive(&so, &verb, &sy).unwrap().value()),
        );
        let scale = weighted_scale(&c1, outer(&abs_o, &abs_lin(a, x, b, y)));
        all_close(&lhs, &rhs, &scale)?;

        // verb
        let vmix = catsem::tensor_add(&verb.scale(a), &verb2.scale(b)).unwrap();
        let lhs = dense_tensor(compose_transitive(&sx, &vmix, &so).unwrap().value());
        let rhs = lin(
            a,
            &dense_tensor(compose_transitive(&sx, &verb, &so).unwrap().value()),
            b,
            &dense_tensor(compose_transitive(&sx, &verb2, &so).unwrap().value()),
        );
        let args: Vec<f64> = outer(x, o).iter().map(|v| v.abs()).collect();
        let scale: Vec<f64> = abs_lin(a, &c1, b, &c2)
            .iter()
            .zip(&args)
            .map(|(c, g)| c * g)
            .collect();
        all_close(&lhs, &rhs, &scale)?;

        // intransitive and adjective application
        let diag = SemTensor::from_vector(&so);
        let lhs = dense_tensor(compose_intransitive(&mix, &diag).unwrap().value());
        let rhs = lin(
            a,
            &dense_tensor(compose_intransitive(&sx, &diag).unwrap().value()),
            b,
            &dense_tensor(compose_intransitive(&sy, &diag).unwrap().value()),
        );
        let scale = weighted_scale(o, abs_lin(a, x, b, y));
        all_close(&lhs, &rhs, &scale)?;

        let lhs = compose_adjective(&verb, &mix).unwrap().to_dense();
        let rhs = lin(
            a,
            &compose_adjective(&verb, &sx).unwrap().to_dense(),
            b,
            &compose_adjective(&verb, &sy).unwrap().to_dense(),
        );
        let row_scale: Vec<f64> = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| c1[i * dim + j].abs() * ((a * x[j]).abs() + (b * y[j]).abs()))
                    .sum::<f64>()
                    * dim as f64
            })
            .collect();
        all_close(&lhs, &rhs, &row_scale)
    })
}

fn meaning(s: &Arc<BasisRegistry>, dense: &[f64], space: SentenceSpace) -> SentenceMeaning {
    let order = space.order();
    SentenceMeaning::new(SemTensor::from_dense(s, order, dense).unwrap(), space).unwrap()
}

/// Padding with the all-ones vector keeps cosines between meanings of the
/// same space, and mixed-order comparisons agree with explicit embedding.
pub fn embedding_cosine_preservation() -> Result<(), String> {
    let strategy =
        vectors(2).prop_flat_map(|(dim, vs)| (Just((dim, vs)), matrix(dim), matrix(dim)));
    run(strategy, |((dim, vs), m1, m2)| {
        let s = space(dim);
        let (a, b) = (
            meaning(&s, &vs[0], SentenceSpace::N),
            meaning(&s, &vs[1], SentenceSpace::N),
        );
        let base = a.cosine(&b).unwrap();
        for embed in [embed_to_transitive, embed_to_ditransitive] {
            let (ea, eb) = (embed(&a).unwrap(), embed(&b).unwrap());
            let c = ea.cosine(&eb).unwrap();
            prop_assert!(close(base, c, 1.0), "{} vs {}", base, c);
        }
        let (p, q) = (
            meaning(&s, &m1, SentenceSpace::NN),
            meaning(&s, &m2, SentenceSpace::NN),
        );
        let base = p.cosine(&q).unwrap();
        let (ep, eq) = (
            embed_to_ditransitive(&p).unwrap(),
            embed_to_ditransitive(&q).unwrap(),
        );
        let c = ep.cosine(&eq).unwrap();
        prop_assert!(close(base, c, 1.0), "{} vs {}", base, c);

        let mixed = a.cosine(&p).unwrap();
        let explicit = embed_to_transitive(&a).unwrap().cosine(&p).unwrap();
        prop_assert!(close(mixed, explicit, 1.0));
        let mut padded = Vec::with_capacity(dim * dim);
        for x in &vs[0] {
            padded.extend(std::iter::repeat_n(*x, dim));
        }
        prop_assert!(close(mixed, dense_cosine(&padded, &m1), 1.0));
        Ok(())
    })
}

fn ratings(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(
        prop_oneof![(0i32..6).prop_map(f64::from), -20.0..20.0f64],
        len,
    )
}

fn is_constant(xs: &[f64]) -> bool {
    xs.iter().all(|x| *x == xs[0])
}

/// Strictly monotone transforms of either list leave rho unchanged.
pub fn spearman_monotone_invariance() -> Result<(), String> {
    let strategy = (2usize..24).prop_flat_map(|n| (ratings(n), ratings(n)));
    run(strategy, |(xs, ys)| {
        let rho = spearman_rho(&xs, &ys);
        if is_constant(&xs) || is_constant(&ys) {
            prop_assert!(matches!(rho, Err(Error::ConstantInput(_))));
            return Ok(());
        }
        let rho = rho.unwrap();
        prop_assert!((-1.0..=1.0).contains(&rho));
        prop_assert!(close(rho, spearman_oracle(&xs, &ys), 1.0));
        let cube: Vec<f64> = xs.iter().map(|x| x * x * x + 2.0 * x).collect();
        let exp: Vec<f64> = ys.iter().map(|y| (y / 4.0).exp()).collect();
        let neg: Vec<f64> = ys.iter().map(|y| 7.0 - 3.0 * y).collect();
        prop_assert_eq!(spearman_rho(&cube, &ys).unwrap(), rho);
        prop_assert_eq!(spearman_rho(&xs, &exp).unwrap(), rho);
        prop_assert_eq!(spearman_rho(&cube, &exp).unwrap(), rho);
        prop_assert_eq!(spearman_rho(&xs, &neg).unwrap(), -rho);
        Ok(())
    })
}

/// Every length-n sequence over `0..n` for `n ≤ max_len`: this covers every
/// pattern of ties and orderings.
fn for_each_rank_pattern(
    max_len: usize,
    mut f: impl FnMut(&[f64]) -> Result<(), String>,
) -> Result<(), String> {
    for n in 1..=max_len {
        let mut digits = vec![0usize; n];
        loop {
            let xs: Vec<f64> = digits.iter().map(|&d| d as f64).collect();
            f(&xs)?;
            let mut k = 0;
            while k < n && digits[k] == n - 1 {
                digits[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
            digits[k] += 1;
        }
    }
    Ok(())
}

/// Average ranks and rho agree with the counting oracle on every rank
/// multiset of length up to `max_len`; returns how many were checked.
pub fn spearman_tie_oracle(max_len: usize) -> Result<usize, String> {
    let mut checked = 0;
    for_each_rank_pattern(max_len, |xs| {
        checked += 1;
        let got = average_ranks(xs);
        let want = rank_oracle(xs);
        if got != want {
            return Err(format!("ranks of {xs:?}: {got:?} vs {want:?}"));
        }
        if xs.len() < 2 {
            return Ok(());
        }
        // Partner list with its own tie at the front.
        let mut ys: Vec<f64> = (0..xs.len()).map(|k| (k * k) as f64).collect();
        ys[0] = ys[1];
        if is_constant(&ys) {
            ys[0] = -1.0;
        }
        match spearman_rho(xs, &ys) {
            Err(Error::ConstantInput(_)) if is_constant(xs) => Ok(()),
            Ok(rho) if !is_constant(xs) => {
                let want = spearman_oracle(xs, &ys);
                if (rho - want).abs() <= TOL {
                    Ok(())
                } else {
                    Err(format!("rho({xs:?}, {ys:?}) = {rho}, oracle {want}"))
                }
            }
            other => Err(format!("rho({xs:?}, {ys:?}) gave {other:?}")),
        }
    })?;
    Ok(checked)
}

/// Sparse operations agree with dense loops.
pub fn sparse_dense_agreement() -> Result<(), String> {
    run(vectors(2), |(dim, vs)| {
        let s = space(dim);
        let (u, v) = (&vs[0], &vs[1]);
        let (su, sv) = (wv(&s, u), wv(&s, v));
        prop_assert_eq!(su.to_dense(), u.clone());
        prop_assert_eq!(su.nnz(), u.iter().filter(|x| **x != 0.0).count());
        let dot: f64 = u.iter().zip(v).map(|(x, y)| x * y).sum();
        let scale: f64 = u.iter().zip(v).map(|(x, y)| (x * y).abs()).sum();
        prop_assert!(close(inner(&su, &sv).unwrap(), dot, scale));
        let n: f64 = u.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assert!(close(norm(&su), n, n));
        prop_assert_eq!(add(&su, &sv).unwrap().to_dense(), lin(1.0, u, 1.0, v));
        let prod: Vec<f64> = u.iter().zip(v).map(|(x, y)| x * y).collect();
        prop_assert_eq!(pointwise_mul(&su, &sv).unwrap().to_dense(), prod);
        prop_assert_eq!(dense_tensor(&kronecker(&su, &sv).unwrap()), outer(u, v));
        let t = SemTensor::from_dense(&s, 2, &outer(u, v)).unwrap();
        prop_assert_eq!(t.to_dense(), outer(u, v));
        prop_assert_eq!(dense_tensor(&t), outer(u, v));
        Ok(())
    })
}

fn documents() -> impl Strategy<Value = Vec<Vec<String>>> {
    let token = (0usize..7).prop_map(|k| format!("w{k}"));
    prop::collection::vec(prop::collection::vec(token, 0..12), 0..10)
}

/// Counting a corpus in one go, in chunks merged in either association, or
/// in parallel all give the same accumulator.
pub fn accumulator_merge() -> Result<(), String> {
    let strategy = (
        documents(),
        1usize..4,
        any::<prop::sample::Index>(),
        any::<prop::sample::Index>(),
    );
    run(strategy, |(docs, window, i, j)| {
        let basis = BasisRegistry::plain("N", ["w0", "w1", "w2", "w3"]).unwrap();
        let targets: BTreeSet<String> = ["w2", "w4", "w5", "w6"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let whole = count_cooccurrence(&docs, &targets, &basis, window).unwrap();
        let (mut a, mut b) = (i.index(docs.len() + 1), j.index(docs.len() + 1));
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        let part = |r: &[Vec<String>]| count_cooccurrence(r, &targets, &basis, window).unwrap();
        let (x, y, z) = (part(&docs[..a]), part(&docs[a..b]), part(&docs[b..]));
        let left = x.clone().merged(&y).unwrap().merged(&z).unwrap();
        let right = x.merged(&y.merged(&z).unwrap()).unwrap();
        prop_assert_eq!(&left, &whole);
        prop_assert_eq!(&right, &whole);
        let par = count_cooccurrence_par(&docs, &targets, &basis, window).unwrap();
        prop_assert_eq!(&par, &whole);
        Ok(())
    })
}

/// Reordering occurrences does not change the verb tensor, and
/// non-negative vectors give a non-negative tensor.
pub fn verb_tensor_permutation_and_sign() -> Result<(), String> {
    let strategy = (1..=MAX_DIM).prop_flat_map(|dim| {
        let nonneg = prop::collection::vec(prop_oneof![Just(0.0), 0.0..10.0f64], dim);
        let pairs = prop::collection::vec((nonneg.clone(), nonneg), 0..6);
        (Just(dim), pairs).prop_flat_map(|(dim, pairs)| {
            let n = pairs.len();
            (
                Just(dim),
                Just(pairs),
                Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
            )
        })
    });
    run(strategy, |(dim, pairs, perm)| {
        let s = space(dim);
        let occ: Vec<(WeightedVector, WeightedVector)> =
            pairs.iter().map(|(a, b)| (wv(&s, a), wv(&s, b))).collect();
        let shuffled: Vec<_> = perm.iter().map(|&k| occ[k].clone()).collect();
        let t = dense_tensor(&build_verb_tensor(&s, &occ).unwrap());
        let u = dense_tensor(&build_verb_tensor(&s, &shuffled).unwrap());
        let mut oracle: BTreeMap<usize, f64> = BTreeMap::new();
        for (a, b) in &pairs {
            for (k, w) in outer(a, b).into_iter().enumerate() {
                *oracle.entry(k).or_insert(0.0) += w;
            }
        }
        let want: Vec<f64> = (0..dim * dim)
            .map(|k| oracle.get(&k).copied().unwrap_or(0.0))
            .collect();
        all_close(&t, &u, &want)?;
        all_close(&t, &want, &want)?;
        prop_assert!(t.iter().all(|w| *w >= 0.0));
        Ok(())
    })
}
