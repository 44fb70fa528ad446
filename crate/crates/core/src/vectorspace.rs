//! Sparse weighted vectors and order 1–3 tensors over a named basis.
//!
//! Both containers keep only non-zero, finite weights in index order. Two
//! operands are compatible when they share a [`BasisRegistry`] (same name and
//! same labels in the same order). Tensors of equal order compare through
//! their row-major flattening, which is exactly the order of the underlying
//! `BTreeMap`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisKind {
    /// Bases are bare words.
    Plain,
    /// Bases are `relation-word` properties such as `subj-chase`.
    Structured,
}

/// Bijection between basis labels and dense indices `0..dim`.
#[derive(Debug, Clone)]
pub struct BasisRegistry {
    name: String,
    labels: Vec<String>,
    index: HashMap<String, usize>,
    kind: BasisKind,
}

impl PartialEq for BasisRegistry {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.kind == other.kind && self.labels == other.labels
    }
}

impl BasisRegistry {
    pub fn new<I, S>(name: impl Into<String>, labels: I, kind: BasisKind) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyBasis);
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() || label.contains(char::is_whitespace) {
                return Err(Error::InvalidRecord(format!("bad basis label `{label}`")));
            }
            if kind == BasisKind::Structured && split_property(label).is_none() {
                return Err(Error::InvalidRecord(format!(
                    "structured basis label `{label}` is not of the form relation-word"
                )));
            }
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Arc::new(BasisRegistry {
            name: name.into(),
            labels,
            index,
            kind,
        }))
    }

    pub fn plain<I, S>(name: impl Into<String>, labels: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::new(name, labels, BasisKind::Plain)
    }

    pub fn structured<I, S>(name: impl Into<String>, labels: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::new(name, labels, BasisKind::Structured)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> Option<&str> {
        self.labels.get(i).map(String::as_str)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn require(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::UnknownLabel(label.to_owned()))
    }
}

/// Splits a structured label `subj-chase` into `("subj", "chase")`.
pub fn split_property(label: &str) -> Option<(&str, &str)> {
    let (rel, word) = label.split_once('-')?;
    (!rel.is_empty() && !word.is_empty()).then_some((rel, word))
}

fn check_space(a: &Arc<BasisRegistry>, b: &Arc<BasisRegistry>) -> Result<()> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(Error::SpaceMismatch {
            left: a.name.clone(),
            right: b.name.clone(),
        })
    }
}

fn check_weight(w: f64) -> Result<()> {
    if w.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(w))
    }
}

fn merge_add<K: Ord + Clone>(a: &BTreeMap<K, f64>, b: &BTreeMap<K, f64>) -> BTreeMap<K, f64> {
    let mut out = a.clone();
    for (k, &w) in b {
        let e = out.entry(k.clone()).or_insert(0.0);
        *e += w;
        if *e == 0.0 {
            out.remove(k);
        }
    }
    out
}

fn merge_mul<K: Ord + Clone>(a: &BTreeMap<K, f64>, b: &BTreeMap<K, f64>) -> BTreeMap<K, f64> {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    small
        .iter()
        .filter_map(|(k, &x)| large.get(k).map(|&y| (k.clone(), x * y)))
        .filter(|&(_, w)| w != 0.0)
        .collect()
}

fn dot<K: Ord>(a: &BTreeMap<K, f64>, b: &BTreeMap<K, f64>) -> f64 {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    small
        .iter()
        .filter_map(|(k, &x)| large.get(k).map(|&y| x * y))
        .fold(0.0, |acc, p| acc + p)
}

fn scaled<K: Ord + Clone>(a: &BTreeMap<K, f64>, alpha: f64) -> BTreeMap<K, f64> {
    if alpha == 0.0 {
        return BTreeMap::new();
    }
    a.iter()
        .map(|(k, &w)| (k.clone(), w * alpha))
        .filter(|&(_, w)| w != 0.0)
        .collect()
}

/// Cosine from an inner product and two norms; 0 when either norm vanishes.
fn cosine_of(inner: f64, na: f64, nb: f64) -> f64 {
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (inner / (na * nb)).clamp(-1.0, 1.0)
}

/// Sparse vector in a basis space.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedVector {
    space: Arc<BasisRegistry>,
    entries: BTreeMap<usize, f64>,
}

impl WeightedVector {
    pub fn zeros(space: &Arc<BasisRegistry>) -> Self {
        WeightedVector {
            space: Arc::clone(space),
            entries: BTreeMap::new(),
        }
    }

    /// Builds a vector from `(index, weight)` pairs. Repeated indices are
    /// summed.
    pub fn from_entries<I>(space: &Arc<BasisRegistry>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, f64)>,
    {
        let dim = space.dim();
        let mut map = BTreeMap::new();
        for (i, w) in entries {
            if i >= dim {
                return Err(Error::IndexOutOfRange { index: i, dim });
            }
            check_weight(w)?;
            *map.entry(i).or_insert(0.0) += w;
        }
        map.retain(|_, w| *w != 0.0);
        Ok(WeightedVector {
            space: Arc::clone(space),
            entries: map,
        })
    }

    pub fn from_dense(space: &Arc<BasisRegistry>, dense: &[f64]) -> Result<Self> {
        if dense.len() != space.dim() {
            return Err(Error::LengthMismatch(dense.len(), space.dim()));
        }
        Self::from_entries(space, dense.iter().copied().enumerate())
    }

    pub fn from_labels<'a, I>(space: &Arc<BasisRegistry>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, f64)>,
    {
        let pairs = entries
            .into_iter()
            .map(|(l, w)| space.require(l).map(|i| (i, w)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_entries(space, pairs)
    }

    /// Unit vector `e_i`.
    pub fn basis(space: &Arc<BasisRegistry>, i: usize) -> Result<Self> {
        Self::from_entries(space, [(i, 1.0)])
    }

    /// Sum of all basis vectors.
    pub fn ones(space: &Arc<BasisRegistry>) -> Self {
        WeightedVector {
            space: Arc::clone(space),
            entries: (0..space.dim()).map(|i| (i, 1.0)).collect(),
        }
    }

    pub fn space(&self) -> &Arc<BasisRegistry> {
        &self.space
    }

    pub fn get(&self, i: usize) -> f64 {
        self.entries.get(&i).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.entries.iter().map(|(&i, &w)| (i, w))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut dense = vec![0.0; self.space.dim()];
        for (&i, &w) in &self.entries {
            dense[i] = w;
        }
        dense
    }

    pub fn scale(&self, alpha: f64) -> Self {
        WeightedVector {
            space: Arc::clone(&self.space),
            entries: scaled(&self.entries, alpha),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        add(self, other)
    }

    pub fn inner(&self, other: &Self) -> Result<f64> {
        inner(self, other)
    }

    pub fn norm(&self) -> f64 {
        norm(self)
    }
}

impl fmt::Display for WeightedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, w) in self.to_dense().iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, "]")
    }
}

pub fn add(v: &WeightedVector, w: &WeightedVector) -> Result<WeightedVector> {
    check_space(&v.space, &w.space)?;
    Ok(WeightedVector {
        space: Arc::clone(&v.space),
        entries: merge_add(&v.entries, &w.entries),
    })
}

pub fn pointwise_mul(v: &WeightedVector, w: &WeightedVector) -> Result<WeightedVector> {
    check_space(&v.space, &w.space)?;
    Ok(WeightedVector {
        space: Arc::clone(&v.space),
        entries: merge_mul(&v.entries, &w.entries),
    })
}

pub fn inner(v: &WeightedVector, w: &WeightedVector) -> Result<f64> {
    check_space(&v.space, &w.space)?;
    Ok(dot(&v.entries, &w.entries))
}

pub fn norm(v: &WeightedVector) -> f64 {
    dot(&v.entries, &v.entries).sqrt()
}

/// Cosine similarity; a zero vector has similarity 0 with everything.
pub fn cosine(v: &WeightedVector, w: &WeightedVector) -> Result<f64> {
    let ip = inner(v, w)?;
    Ok(cosine_of(ip, norm(v), norm(w)))
}

pub fn kronecker(v: &WeightedVector, w: &WeightedVector) -> Result<SemTensor> {
    check_space(&v.space, &w.space)?;
    let mut entries = BTreeMap::new();
    for (&i, &a) in &v.entries {
        for (&j, &b) in &w.entries {
            let x = a * b;
            if x != 0.0 {
                entries.insert(vec![i, j], x);
            }
        }
    }
    Ok(SemTensor {
        space: Arc::clone(&v.space),
        order: 2,
        entries,
    })
}

pub fn kronecker3(u: &WeightedVector, v: &WeightedVector, w: &WeightedVector) -> Result<SemTensor> {
    check_space(&u.space, &v.space)?;
    check_space(&u.space, &w.space)?;
    let mut entries = BTreeMap::new();
    for (&i, &a) in &u.entries {
        for (&j, &b) in &v.entries {
            for (&k, &c) in &w.entries {
                let x = a * b * c;
                if x != 0.0 {
                    entries.insert(vec![i, j, k], x);
                }
            }
        }
    }
    Ok(SemTensor {
        space: Arc::clone(&u.space),
        order: 3,
        entries,
    })
}

/// Sparse tensor of order 1, 2 or 3 over a single basis space.
#[derive(Debug, Clone, PartialEq)]
pub struct SemTensor {
    space: Arc<BasisRegistry>,
    order: usize,
    entries: BTreeMap<Vec<usize>, f64>,
}

fn check_order(order: usize) -> Result<()> {
    if (1..=3).contains(&order) {
        Ok(())
    } else {
        Err(Error::UnsupportedOrder(order))
    }
}

impl SemTensor {
    pub fn zeros(space: &Arc<BasisRegistry>, order: usize) -> Result<Self> {
        check_order(order)?;
        Ok(SemTensor {
            space: Arc::clone(space),
            order,
            entries: BTreeMap::new(),
        })
    }

    /// Builds a tensor from `(index tuple, weight)` pairs; repeated tuples
    /// are summed.
    pub fn from_entries<I>(space: &Arc<BasisRegistry>, order: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<usize>, f64)>,
    {
        check_order(order)?;
        let dim = space.dim();
        let mut map = BTreeMap::new();
        for (idx, w) in entries {
            if idx.len() != order {
                return Err(Error::OrderMismatch {
                    expected: order,
                    found: idx.len(),
                });
            }
            if let Some(&bad) = idx.iter().find(|&&i| i >= dim) {
                return Err(Error::IndexOutOfRange { index: bad, dim });
            }
            check_weight(w)?;
            *map.entry(idx).or_insert(0.0) += w;
        }
        map.retain(|_, w| *w != 0.0);
        Ok(SemTensor {
            space: Arc::clone(space),
            order,
            entries: map,
        })
    }

    /// Row-major dense input of length `dim^order`.
    pub fn from_dense(space: &Arc<BasisRegistry>, order: usize, dense: &[f64]) -> Result<Self> {
        check_order(order)?;
        let dim = space.dim();
        let len = dim.pow(order as u32);
        if dense.len() != len {
            return Err(Error::LengthMismatch(dense.len(), len));
        }
        Self::from_entries(
            space,
            order,
            dense
                .iter()
                .enumerate()
                .map(|(flat, &w)| (unflatten(flat, dim, order), w)),
        )
    }

    pub fn from_vector(v: &WeightedVector) -> Self {
        SemTensor {
            space: Arc::clone(&v.space),
            order: 1,
            entries: v.entries.iter().map(|(&i, &w)| (vec![i], w)).collect(),
        }
    }

    /// Order-1 tensors viewed as vectors.
    pub fn to_vector(&self) -> Option<WeightedVector> {
        (self.order == 1).then(|| WeightedVector {
            space: Arc::clone(&self.space),
            entries: self.entries.iter().map(|(k, &w)| (k[0], w)).collect(),
        })
    }

    /// Order-2 tensor with `diag` on the diagonal.
    pub fn diagonal(v: &WeightedVector) -> Self {
        SemTensor {
            space: Arc::clone(&v.space),
            order: 2,
            entries: v.entries.iter().map(|(&i, &w)| (vec![i, i], w)).collect(),
        }
    }

    pub fn space(&self) -> &Arc<BasisRegistry> {
        &self.space
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.entries.get(idx).copied().unwrap_or(0.0)
    }

    /// Non-zero entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (&[usize], f64)> + '_ {
        self.entries.iter().map(|(k, &w)| (k.as_slice(), w))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of all entries.
    pub fn mass(&self) -> f64 {
        self.entries.values().fold(0.0, |acc, w| acc + w)
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let dim = self.space.dim();
        let mut dense = vec![0.0; dim.pow(self.order as u32)];
        for (k, &w) in &self.entries {
            dense[flatten(k, dim)] = w;
        }
        dense
    }

    pub fn scale(&self, alpha: f64) -> Self {
        SemTensor {
            space: Arc::clone(&self.space),
            order: self.order,
            entries: scaled(&self.entries, alpha),
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        check_space(&self.space, &other.space)?;
        if self.order != other.order {
            return Err(Error::OrderMismatch {
                expected: self.order,
                found: other.order,
            });
        }
        Ok(())
    }

    /// Component-wise product of two tensors of equal order.
    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(SemTensor {
            space: Arc::clone(&self.space),
            order: self.order,
            entries: merge_mul(&self.entries, &other.entries),
        })
    }

    pub fn inner(&self, other: &Self) -> Result<f64> {
        self.check_compatible(other)?;
        Ok(dot(&self.entries, &other.entries))
    }

    pub fn norm(&self) -> f64 {
        dot(&self.entries, &self.entries).sqrt()
    }

    pub fn cosine(&self, other: &Self) -> Result<f64> {
        let ip = self.inner(other)?;
        Ok(cosine_of(ip, self.norm(), other.norm()))
    }

    pub(crate) fn from_map(
        space: &Arc<BasisRegistry>,
        order: usize,
        entries: BTreeMap<Vec<usize>, f64>,
    ) -> Self {
        debug_assert!(entries.keys().all(|k| k.len() == order));
        SemTensor {
            space: Arc::clone(space),
            order,
            entries,
        }
    }
}

pub fn tensor_add(a: &SemTensor, b: &SemTensor) -> Result<SemTensor> {
    a.check_compatible(b)?;
    Ok(SemTensor {
        space: Arc::clone(&a.space),
        order: a.order,
        entries: merge_add(&a.entries, &b.entries),
    })
}

/// Row-major flat index.
pub fn flatten(idx: &[usize], dim: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * dim + i)
}

pub fn unflatten(mut flat: usize, dim: usize, order: usize) -> Vec<usize> {
    let mut idx = vec![0; order];
    for slot in idx.iter_mut().rev() {
        *slot = flat % dim;
        flat /= dim;
    }
    idx
}
