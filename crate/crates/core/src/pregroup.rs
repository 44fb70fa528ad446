//! Pregroup types and linear (left-to-right) type reduction.
//!
//! An atomic type is a base symbol carrying an integer adjoint order: `0` is
//! the plain type, `+1` its right adjoint `x^r`, `-1` its left adjoint `x^l`,
//! and larger magnitudes iterate (`x^rr`, `x^ll`, ...). Two adjacent atoms
//! `x^(z) x^(z+1)` cancel. This covers both `x^l x <= 1` and `x x^r <= 1`.
//!
//! [`reduce`] reads a typed word sequence once, left to right, keeping a stack
//! of uncancelled atoms. Each cancellation is recorded as a [`Link`], and the
//! resulting [`ContractionPlan`] tells the composition engine which tensor
//! indices to contract.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Name of a basic grammatical type, e.g. `n` or `s`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BaseSymbol(String);

impl BaseSymbol {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(Error::InvalidType(name));
        }
        Ok(BaseSymbol(name))
    }

    /// Noun phrases.
    pub fn noun() -> Self {
        BaseSymbol("n".to_owned())
    }

    /// Statements.
    pub fn sentence() -> Self {
        BaseSymbol("s".to_owned())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for BaseSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomicType {
    pub base: BaseSymbol,
    pub adjoint_order: i32,
}

impl AtomicType {
    pub fn plain(base: BaseSymbol) -> Self {
        AtomicType {
            base,
            adjoint_order: 0,
        }
    }

    pub fn with_order(base: BaseSymbol, adjoint_order: i32) -> Self {
        AtomicType {
            base,
            adjoint_order,
        }
    }

    pub fn left_adjoint(&self) -> Self {
        left_adjoint(self)
    }

    pub fn right_adjoint(&self) -> Self {
        right_adjoint(self)
    }

    /// True when `self` immediately followed by `next` reduces to the unit.
    pub fn cancels_with(&self, next: &AtomicType) -> bool {
        self.base == next.base && next.adjoint_order == self.adjoint_order + 1
    }

    pub fn is_plain(&self) -> bool {
        self.adjoint_order == 0
    }
}

pub fn left_adjoint(t: &AtomicType) -> AtomicType {
    AtomicType::with_order(t.base.clone(), t.adjoint_order - 1)
}

pub fn right_adjoint(t: &AtomicType) -> AtomicType {
    AtomicType::with_order(t.base.clone(), t.adjoint_order + 1)
}

impl fmt::Display for AtomicType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.base)?;
        let z = self.adjoint_order;
        if z != 0 {
            let mark = if z > 0 { "r" } else { "l" };
            write!(f, "^{}", mark.repeat(z.unsigned_abs() as usize))?;
        }
        Ok(())
    }
}

/// A (possibly empty) concatenation of atomic types. The empty type is the
/// unit `1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PregroupType {
    atoms: Vec<AtomicType>,
}

impl PregroupType {
    pub fn new(atoms: Vec<AtomicType>) -> Self {
        PregroupType { atoms }
    }

    pub fn unit() -> Self {
        PregroupType::default()
    }

    pub fn atoms(&self) -> &[AtomicType] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn concat(&self, other: &PregroupType) -> PregroupType {
        let mut atoms = self.atoms.clone();
        atoms.extend(other.atoms.iter().cloned());
        PregroupType { atoms }
    }

    /// `(xy)^l = y^l x^l`.
    pub fn left_adjoint(&self) -> PregroupType {
        PregroupType {
            atoms: self.atoms.iter().rev().map(left_adjoint).collect(),
        }
    }

    /// `(xy)^r = y^r x^r`.
    pub fn right_adjoint(&self) -> PregroupType {
        PregroupType {
            atoms: self.atoms.iter().rev().map(right_adjoint).collect(),
        }
    }

    fn simple(parts: &[(&str, i32)]) -> Self {
        PregroupType {
            atoms: parts
                .iter()
                .map(|&(b, z)| AtomicType::with_order(BaseSymbol(b.to_owned()), z))
                .collect(),
        }
    }

    /// `n`
    pub fn noun() -> Self {
        Self::simple(&[("n", 0)])
    }

    /// `n^r s`
    pub fn intransitive_verb() -> Self {
        Self::simple(&[("n", 1), ("s", 0)])
    }

    /// `n^r s n^l`
    pub fn transitive_verb() -> Self {
        Self::simple(&[("n", 1), ("s", 0), ("n", -1)])
    }

    /// `n^r s n^l n^l`
    pub fn ditransitive_verb() -> Self {
        Self::simple(&[("n", 1), ("s", 0), ("n", -1), ("n", -1)])
    }

    /// `n n^l`
    pub fn adjective() -> Self {
        Self::simple(&[("n", 0), ("n", -1)])
    }

    /// `(n^r s)^r (n^r s)`, i.e. `s^r n^rr n^r s`.
    pub fn adverb() -> Self {
        let iv = Self::intransitive_verb();
        iv.right_adjoint().concat(&iv)
    }
}

impl fmt::Display for PregroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return f.write_str("1");
        }
        for (k, a) in self.atoms.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl FromStr for PregroupType {
    type Err = Error;

    /// Parses `n^r s n^l`. Adjoint marks may be written `n^ll` or `n^l^l`;
    /// parenthesised groups take adjoints as a whole, so `(n^r s)^r` is
    /// `s^r n^rr`. A lone `1` denotes the unit.
    fn from_str(src: &str) -> Result<Self> {
        let mut parser = TypeParser {
            src,
            chars: src.char_indices().peekable(),
        };
        let ty = parser.sequence(false)?;
        Ok(ty)
    }
}

struct TypeParser<'a> {
    src: &'a str,
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
}

impl TypeParser<'_> {
    fn err(&self) -> Error {
        Error::InvalidType(self.src.to_owned())
    }

    fn skip_ws(&mut self) {
        while matches!(self.chars.peek(), Some((_, c)) if c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn sequence(&mut self, nested: bool) -> Result<PregroupType> {
        let mut atoms = Vec::new();
        loop {
            self.skip_ws();
            match self.chars.peek().copied() {
                None if nested => return Err(self.err()),
                None => break,
                Some((_, ')')) if nested => {
                    self.chars.next();
                    break;
                }
                Some((_, '(')) => {
                    self.chars.next();
                    let inner = self.sequence(true)?;
                    let z = self.adjoints()?;
                    let mut group = inner;
                    for _ in 0..z.unsigned_abs() {
                        group = if z > 0 {
                            group.right_adjoint()
                        } else {
                            group.left_adjoint()
                        };
                    }
                    atoms.extend(group.atoms);
                }
                Some((_, c)) if c.is_alphanumeric() || c == '_' => {
                    let mut name = String::new();
                    while let Some(&(_, c)) = self.chars.peek() {
                        if c.is_alphanumeric() || c == '_' {
                            name.push(c);
                            self.chars.next();
                        } else {
                            break;
                        }
                    }
                    let z = self.adjoints()?;
                    if name == "1" && z == 0 {
                        continue;
                    }
                    atoms.push(AtomicType::with_order(BaseSymbol::new(name)?, z));
                }
                Some(_) => return Err(self.err()),
            }
        }
        Ok(PregroupType { atoms })
    }

    fn adjoints(&mut self) -> Result<i32> {
        let mut z = 0i32;
        while matches!(self.chars.peek(), Some((_, '^'))) {
            self.chars.next();
            let mut any = false;
            while let Some(&(_, c)) = self.chars.peek() {
                match c {
                    'r' => z += 1,
                    'l' => z -= 1,
                    _ => break,
                }
                any = true;
                self.chars.next();
            }
            if !any {
                return Err(self.err());
            }
        }
        Ok(z)
    }
}

/// Word to type assignments.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: BTreeMap<String, Vec<PregroupType>>,
}

/// Upper bound on the number of type combinations tried when words are
/// ambiguous.
const MAX_ASSIGNMENTS: usize = 4096;

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an assignment; duplicates are ignored.
    pub fn insert(&mut self, word: impl Into<String>, ty: PregroupType) {
        let types = self.entries.entry(word.into()).or_default();
        if !types.contains(&ty) {
            types.push(ty);
        }
    }

    pub fn types(&self, word: &str) -> Option<&[PregroupType]> {
        self.entries.get(word).map(Vec::as_slice)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains_key(word)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[PregroupType])> {
        self.entries.iter().map(|(w, t)| (w.as_str(), t.as_slice()))
    }

    /// Lexicon with the five standard word classes, each represented by its
    /// class name: `noun`, `intransitive`, `transitive`, `ditransitive`,
    /// `adjective`.
    pub fn standard() -> Self {
        let mut lex = Lexicon::new();
        lex.insert("noun", PregroupType::noun());
        lex.insert("intransitive", PregroupType::intransitive_verb());
        lex.insert("transitive", PregroupType::transitive_verb());
        lex.insert("ditransitive", PregroupType::ditransitive_verb());
        lex.insert("adjective", PregroupType::adjective());
        lex
    }

    /// Parses the `word<TAB>type` format. Blank lines and `#` comments are
    /// skipped; repeated words accumulate alternative assignments.
    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let mut lex = Lexicon::new();
        for (k, raw) in text.lines().enumerate() {
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            let (word, ty) = line
                .split_once('\t')
                .ok_or_else(|| Error::parse(origin, k + 1, "expected `word<TAB>type`"))?;
            let word = word.trim();
            if word.is_empty() {
                return Err(Error::parse(origin, k + 1, "empty word"));
            }
            let ty: PregroupType = ty
                .parse()
                .map_err(|e: Error| Error::parse(origin, k + 1, e.to_string()))?;
            if ty.is_empty() {
                return Err(Error::parse(origin, k + 1, "empty type"));
            }
            lex.insert(word, ty);
        }
        Ok(lex)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    /// Picks one type per word. With ambiguous words, the first combination
    /// (in lexicon order) that reduces to a sentence or a noun phrase wins;
    /// otherwise the first combination is returned so the caller sees the
    /// ungrammatical residual.
    pub fn assign<S: AsRef<str>>(&self, words: &[S]) -> Result<Vec<PregroupType>> {
        let options = words
            .iter()
            .map(|w| {
                self.types(w.as_ref())
                    .ok_or_else(|| Error::UnknownWord(w.as_ref().to_owned()))
            })
            .collect::<Result<Vec<_>>>()?;

        let mut choice = vec![0usize; options.len()];
        let mut tried = 0usize;
        loop {
            let types: Vec<PregroupType> = choice
                .iter()
                .zip(&options)
                .map(|(&c, opts)| opts[c].clone())
                .collect();
            let red = reduce(&types);
            if is_sentence(&red, &BaseSymbol::sentence()) || is_sentence(&red, &BaseSymbol::noun())
            {
                return Ok(types);
            }
            tried += 1;
            if tried >= MAX_ASSIGNMENTS || !advance(&mut choice, &options) {
                break;
            }
        }
        Ok(options.iter().map(|opts| opts[0].clone()).collect())
    }
}

fn advance(choice: &mut [usize], options: &[&[PregroupType]]) -> bool {
    for k in (0..choice.len()).rev() {
        if choice[k] + 1 < options[k].len() {
            choice[k] += 1;
            for c in &mut choice[k + 1..] {
                *c = 0;
            }
            return true;
        }
    }
    false
}

pub(crate) fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// A cancellation between two atoms of the flattened input, `left < right`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Link {
    pub left: usize,
    pub right: usize,
}

pub type ContractionPlan = Vec<Link>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionResult {
    pub residual: PregroupType,
    /// Positions (in the flattened atom sequence) of the residual atoms.
    pub residual_positions: Vec<usize>,
    /// Links in the order the cancellations happened.
    pub links: ContractionPlan,
}

impl ReductionResult {
    pub fn atom_count(&self) -> usize {
        self.residual.len() + 2 * self.links.len()
    }
}

/// Eager left-to-right reduction: each incoming atom cancels the top of the
/// stack when the two form `x^(z) x^(z+1)`, and is pushed otherwise.
pub fn reduce(types: &[PregroupType]) -> ReductionResult {
    let mut stack: Vec<(usize, &AtomicType)> = Vec::new();
    let mut links = Vec::new();
    let atoms = types.iter().flat_map(|t| t.atoms.iter());
    for (pos, atom) in atoms.enumerate() {
        match stack.last() {
            Some(&(top_pos, top)) if top.cancels_with(atom) => {
                stack.pop();
                links.push(Link {
                    left: top_pos,
                    right: pos,
                });
            }
            _ => stack.push((pos, atom)),
        }
    }
    ReductionResult {
        residual: PregroupType::new(stack.iter().map(|(_, a)| (*a).clone()).collect()),
        residual_positions: stack.iter().map(|&(p, _)| p).collect(),
        links,
    }
}

/// True iff the residual is exactly one plain atom of base `s_base`.
pub fn is_sentence(r: &ReductionResult, s_base: &BaseSymbol) -> bool {
    match r.residual.atoms() {
        [only] => only.is_plain() && &only.base == s_base,
        _ => false,
    }
}
