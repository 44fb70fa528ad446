//! Plain-text file formats. Everything is UTF-8 TSV with `#` header
//! comments; output ordering is sorted so reruns are byte-identical.
//!
//! | file              | line format                                  |
//! |-------------------|----------------------------------------------|
//! | basis             | `label`                                      |
//! | vector            | `label<TAB>weight`                            |
//! | vector set        | `word<TAB>label<TAB>weight`                   |
//! | tensor            | `label_1<TAB>...<TAB>label_r<TAB>weight`      |
//! | corpus            | whitespace-separated tokens, one document/line |
//! | triples           | `subject<TAB>verb<TAB>object[<TAB>iobject]`   |
//! | adjectives        | `adjective<TAB>argument`                      |
//!
//! Vector, vector-set and tensor files start with `# space: NAME`; tensor
//! files also carry `# order: R`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use crate::composition::LexicalSemantics;
use crate::corpus::{AdjectiveRecord, TripleRecord};
use crate::error::{Error, Result};
use crate::pregroup::strip_comment;
use crate::vectorspace::{BasisKind, BasisRegistry, SemTensor, WeightedVector};

pub const BASIS_FILE: &str = "basis.txt";
pub const NOUNS_FILE: &str = "nouns.tsv";
pub const VERBS_DIR: &str = "verbs";
pub const ADJECTIVES_DIR: &str = "adjectives";

/// Shortest representation that parses back to the same `f64`.
pub fn format_weight(w: f64) -> String {
    format!("{w}")
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

/// Writes to a sibling temporary file and renames it into place, so a failed
/// run never leaves a truncated output.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

/// `# key: value` header lines.
fn header_value<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines()
        .filter_map(|l| l.trim().strip_prefix('#'))
        .filter_map(|l| l.split_once(':'))
        .find(|(k, _)| k.trim() == key)
        .map(|(_, v)| v.trim())
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, strip_comment(l).trim_end()))
        .filter(|(_, l)| !l.trim().is_empty())
}

fn parse_weight(s: &str, origin: &Path, line: usize) -> Result<f64> {
    let w: f64 = s
        .trim()
        .parse()
        .map_err(|_| Error::parse(origin, line, format!("bad weight `{s}`")))?;
    if !w.is_finite() {
        return Err(Error::parse(
            origin,
            line,
            format!("non-finite weight `{s}`"),
        ));
    }
    Ok(w)
}

/// Parses a basis file. Optional headers `# space: NAME` and
/// `# kind: structured` set the registry name and kind.
pub fn parse_basis(text: &str, origin: &Path, default_name: &str) -> Result<Arc<BasisRegistry>> {
    let name = header_value(text, "space").unwrap_or(default_name);
    let kind = match header_value(text, "kind") {
        Some("structured") => BasisKind::Structured,
        Some("plain") | None => BasisKind::Plain,
        Some(other) => {
            return Err(Error::parse(
                origin,
                1,
                format!("unknown basis kind `{other}`"),
            ))
        }
    };
    let labels: Vec<String> = data_lines(text).map(|(_, l)| l.trim().to_owned()).collect();
    BasisRegistry::new(name, labels, kind)
}

pub fn read_basis(path: &Path) -> Result<Arc<BasisRegistry>> {
    parse_basis(&read(path)?, path, "N")
}

pub fn format_basis(space: &BasisRegistry) -> String {
    let mut out = format!("# space: {}\n", space.name());
    if space.kind() == BasisKind::Structured {
        out.push_str("# kind: structured\n");
    }
    for l in space.labels() {
        out.push_str(l);
        out.push('\n');
    }
    out
}

pub fn format_vector(v: &WeightedVector) -> String {
    let space = v.space();
    let mut out = format!("# space: {}\n", space.name());
    for (i, w) in v.iter() {
        let _ = writeln!(out, "{}\t{}", space.labels()[i], format_weight(w));
    }
    out
}

pub fn parse_vector(
    text: &str,
    space: &Arc<BasisRegistry>,
    origin: &Path,
) -> Result<WeightedVector> {
    let mut entries = Vec::new();
    for (line, l) in data_lines(text) {
        let (label, w) = l
            .split_once('\t')
            .ok_or_else(|| Error::parse(origin, line, "expected `label<TAB>weight`"))?;
        let i = space
            .index_of(label)
            .ok_or_else(|| Error::parse(origin, line, format!("unknown label `{label}`")))?;
        entries.push((i, parse_weight(w, origin, line)?));
    }
    WeightedVector::from_entries(space, entries)
}

pub fn format_vector_set(
    vectors: &BTreeMap<String, WeightedVector>,
    space: &BasisRegistry,
) -> String {
    let mut out = format!("# space: {}\n", space.name());
    for (word, v) in vectors {
        for (i, w) in v.iter() {
            let _ = writeln!(out, "{word}\t{}\t{}", space.labels()[i], format_weight(w));
        }
    }
    out
}

/// Parses a vector-set file. Words listed in a `# zero:` header have no
/// lines and come back as zero vectors.
pub fn parse_vector_set(
    text: &str,
    space: &Arc<BasisRegistry>,
    origin: &Path,
) -> Result<BTreeMap<String, WeightedVector>> {
    let mut rows: BTreeMap<String, Vec<(usize, f64)>> = BTreeMap::new();
    for (line, l) in data_lines(text) {
        let fields: Vec<&str> = l.split('\t').collect();
        let [word, label, w] = fields[..] else {
            return Err(Error::parse(
                origin,
                line,
                "expected `word<TAB>label<TAB>weight`",
            ));
        };
        let i = space
            .index_of(label)
            .ok_or_else(|| Error::parse(origin, line, format!("unknown label `{label}`")))?;
        rows.entry(word.to_owned())
            .or_default()
            .push((i, parse_weight(w, origin, line)?));
    }
    if let Some(words) = header_value(text, "zero") {
        for w in words.split_whitespace() {
            rows.entry(w.to_owned()).or_default();
        }
    }
    rows.into_iter()
        .map(|(word, e)| Ok((word, WeightedVector::from_entries(space, e)?)))
        .collect()
}

/// Like [`format_vector_set`], additionally listing all-zero vectors in a
/// `# zero:` header so they survive a round trip.
pub fn format_vector_set_with_zeros(
    vectors: &BTreeMap<String, WeightedVector>,
    space: &BasisRegistry,
) -> String {
    let zeros: Vec<&str> = vectors
        .iter()
        .filter(|(_, v)| v.is_zero())
        .map(|(w, _)| w.as_str())
        .collect();
    let mut out = String::new();
    if !zeros.is_empty() {
        let _ = writeln!(out, "# zero: {}", zeros.join(" "));
    }
    out + &format_vector_set(vectors, space)
}

pub fn format_tensor(t: &SemTensor) -> String {
    let space = t.space();
    let mut out = format!("# space: {}\n# order: {}\n", space.name(), t.order());
    for (idx, w) in t.iter() {
        for &i in idx {
            out.push_str(&space.labels()[i]);
            out.push('\t');
        }
        out.push_str(&format_weight(w));
        out.push('\n');
    }
    out
}

pub fn parse_tensor(text: &str, space: &Arc<BasisRegistry>, origin: &Path) -> Result<SemTensor> {
    let declared = header_value(text, "order")
        .map(|o| {
            o.parse::<usize>()
                .map_err(|_| Error::parse(origin, 1, format!("bad order `{o}`")))
        })
        .transpose()?;
    let mut entries = Vec::new();
    let mut order = declared;
    for (line, l) in data_lines(text) {
        let fields: Vec<&str> = l.split('\t').collect();
        if fields.len() < 2 {
            return Err(Error::parse(origin, line, "expected labels and a weight"));
        }
        let r = fields.len() - 1;
        match order {
            None => order = Some(r),
            Some(o) if o != r => {
                return Err(Error::parse(
                    origin,
                    line,
                    format!("expected {o} labels, found {r}"),
                ))
            }
            _ => {}
        }
        let idx = fields[..r]
            .iter()
            .map(|label| {
                space
                    .index_of(label)
                    .ok_or_else(|| Error::parse(origin, line, format!("unknown label `{label}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        entries.push((idx, parse_weight(fields[r], origin, line)?));
    }
    let order = order
        .ok_or_else(|| Error::parse(origin, 1, "empty tensor file without `# order:` header"))?;
    SemTensor::from_entries(space, order, entries)
}

pub fn read_tensor(path: &Path, space: &Arc<BasisRegistry>) -> Result<SemTensor> {
    parse_tensor(&read(path)?, space, path)
}

/// One document per non-blank line, whitespace-tokenized.
pub fn parse_corpus(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split_whitespace().map(str::to_owned).collect())
        .collect()
}

pub fn read_corpus(path: &Path) -> Result<Vec<Vec<String>>> {
    Ok(parse_corpus(&read(path)?))
}

pub fn parse_triples(text: &str, origin: &Path) -> Result<Vec<TripleRecord>> {
    data_lines(text)
        .map(|(line, l)| {
            let f: Vec<&str> = l.split('\t').map(str::trim).collect();
            let opt = |k: usize| f.get(k).filter(|s| !s.is_empty()).map(|s| s.to_string());
            if f.len() < 2 || f.len() > 4 {
                return Err(Error::parse(origin, line, "expected 2 to 4 fields"));
            }
            TripleRecord::new(f[0], f[1], opt(2), opt(3))
                .map_err(|e| Error::parse(origin, line, e.to_string()))
        })
        .collect()
}

pub fn read_triples(path: &Path) -> Result<Vec<TripleRecord>> {
    parse_triples(&read(path)?, path)
}

pub fn format_triples(triples: &[TripleRecord]) -> String {
    let mut out = String::new();
    for t in triples {
        out.push_str(&t.subject);
        out.push('\t');
        out.push_str(&t.verb);
        out.push('\t');
        out.push_str(t.object.as_deref().unwrap_or(""));
        if let Some(io) = &t.indirect_object {
            out.push('\t');
            out.push_str(io);
        }
        out.push('\n');
    }
    out
}

pub fn parse_adjectives(text: &str, origin: &Path) -> Result<Vec<AdjectiveRecord>> {
    data_lines(text)
        .map(|(line, l)| {
            let (a, n) = l
                .split_once('\t')
                .ok_or_else(|| Error::parse(origin, line, "expected `adjective<TAB>argument`"))?;
            AdjectiveRecord::new(a.trim(), n.trim())
                .map_err(|e| Error::parse(origin, line, e.to_string()))
        })
        .collect()
}

pub fn read_adjectives(path: &Path) -> Result<Vec<AdjectiveRecord>> {
    parse_adjectives(&read(path)?, path)
}

fn tensor_files(dir: &Path) -> Result<Vec<(String, PathBuf)>> {
    if !dir.is_dir() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let path = entry.map_err(|e| Error::io(dir, e))?.path();
        if path.extension().and_then(|e| e.to_str()) == Some("tsv") {
            if let Some(word) = path.file_stem().and_then(|s| s.to_str()) {
                out.push((word.to_owned(), path.clone()));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Loads a semantics directory: `basis.txt`, `nouns.tsv`, `verbs/*.tsv`,
/// `adjectives/*.tsv`.
pub fn load_semantics(dir: &Path) -> Result<LexicalSemantics> {
    let space = read_basis(&dir.join(BASIS_FILE))?;
    let mut lex = LexicalSemantics::new(&space);
    let nouns_path = dir.join(NOUNS_FILE);
    if nouns_path.exists() {
        for (word, v) in parse_vector_set(&read(&nouns_path)?, &space, &nouns_path)? {
            lex.insert_vector(word, v)?;
        }
    }
    for sub in [VERBS_DIR, ADJECTIVES_DIR] {
        for (word, path) in tensor_files(&dir.join(sub))? {
            lex.insert_tensor(word, read_tensor(&path, &space)?)?;
        }
    }
    Ok(lex)
}

/// Writes a semantics directory. Tensors of order 1 whose word is listed in
/// `adjectives` go to `adjectives/`, everything else to `verbs/`.
pub fn save_semantics(
    dir: &Path,
    lex: &LexicalSemantics,
    adjectives: &std::collections::BTreeSet<String>,
) -> Result<()> {
    write_atomic(&dir.join(BASIS_FILE), &format_basis(lex.space()))?;
    write_atomic(
        &dir.join(NOUNS_FILE),
        &format_vector_set_with_zeros(lex.vectors(), lex.space()),
    )?;
    for (word, t) in lex.tensors() {
        let sub = if adjectives.contains(word) {
            ADJECTIVES_DIR
        } else {
            VERBS_DIR
        };
        write_atomic(
            &dir.join(sub).join(format!("{word}.tsv")),
            &format_tensor(t),
        )?;
    }
    Ok(())
}
