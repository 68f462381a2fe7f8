//! WebNLG-style datasets: triple sets paired with reference texts.
//!
//! Two on-disk formats are supported: the WebNLG benchmark XML and a flat
//! JSONL (one entry per line) used for fixtures. Values are immutable after
//! construction; loading never normalizes triple text (that happens in
//! postprocessing, on model outputs only).

mod jsonl;
mod xml;

pub use jsonl::entries_to_jsonl;

use crate::lang::LanguageCode;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::Path;

/// One RDF fact, stored verbatim from the source file (underscores and
/// quoted literals preserved).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Triple {
    pub subject: String,
    pub predicate: String,
    pub object: String,
}

impl Triple {
    pub fn new(
        subject: impl Into<String>,
        predicate: impl Into<String>,
        object: impl Into<String>,
    ) -> Self {
        Self {
            subject: subject.into(),
            predicate: predicate.into(),
            object: object.into(),
        }
    }
}

/// A triple set plus its reference verbalizations per language.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub id: String,
    pub category: Option<String>,
    /// Declared triple count from the source file. Must equal
    /// `triples.len()`; `validate_corpus` reports entries where it does not.
    pub size: usize,
    pub triples: Vec<Triple>,
    /// Reference texts keyed by language code; empty for unannotated splits.
    pub references: BTreeMap<LanguageCode, Vec<String>>,
}

impl Entry {
    pub fn new(
        id: impl Into<String>,
        category: Option<String>,
        triples: Vec<Triple>,
        references: BTreeMap<LanguageCode, Vec<String>>,
    ) -> Self {
        Self {
            id: id.into(),
            category,
            size: triples.len(),
            triples,
            references,
        }
    }

    pub fn triple_count(&self) -> usize {
        self.triples.len()
    }

    pub fn references_for(&self, language: &LanguageCode) -> &[String] {
        self.references.get(language).map(Vec::as_slice).unwrap_or(&[])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Dev,
    Test,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Split::Train => f.write_str("train"),
            Split::Dev => f.write_str("dev"),
            Split::Test => f.write_str("test"),
        }
    }
}

impl std::str::FromStr for Split {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "train" => Ok(Split::Train),
            "dev" => Ok(Split::Dev),
            "test" => Ok(Split::Test),
            other => Err(format!("unknown split {other:?} (expected train|dev|test)")),
        }
    }
}

/// An ordered collection of entries from one dataset split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub split: Split,
    /// Every language code appearing in any entry's references.
    pub languages: BTreeSet<LanguageCode>,
    pub entries: Vec<Entry>,
}

impl Corpus {
    /// Builds a corpus from entries, deriving the language set.
    pub fn from_entries(split: Split, entries: Vec<Entry>) -> Self {
        let languages = entries
            .iter()
            .flat_map(|e| e.references.keys().cloned())
            .collect();
        Self {
            split,
            languages,
            entries,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, id: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.id == id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorpusFormat {
    WebnlgXml,
    Jsonl,
}

impl std::str::FromStr for CorpusFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "webnlg-xml" | "xml" => Ok(CorpusFormat::WebnlgXml),
            "jsonl" => Ok(CorpusFormat::Jsonl),
            other => Err(format!(
                "unknown corpus format {other:?} (expected webnlg-xml|jsonl)"
            )),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at {locus}: {message}")]
    Parse { locus: String, message: String },
    #[error("corpus has zero entries")]
    EmptyCorpus,
    #[error("duplicate entry id {id:?}")]
    DuplicateId { id: String },
    #[error("sample of {requested} requested but corpus has only {available} entries")]
    SampleTooLarge { requested: usize, available: usize },
}

/// Loads a corpus from `path` in the stated format (no sniffing).
///
/// Entries keep file order. Ids come from the source where present and are
/// synthesized as `{split}-{index}` otherwise.
pub fn load_corpus(
    path: impl AsRef<Path>,
    format: CorpusFormat,
    split: Split,
) -> Result<Corpus, CorpusError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_corpus_str(&text, format, split)
}

/// Same as [`load_corpus`] but over an in-memory document.
pub fn load_corpus_str(
    text: &str,
    format: CorpusFormat,
    split: Split,
) -> Result<Corpus, CorpusError> {
    let entries = match format {
        CorpusFormat::Jsonl => jsonl::parse_entries(text, split)?,
        CorpusFormat::WebnlgXml => xml::parse_entries(text, split)?,
    };
    if entries.is_empty() {
        return Err(CorpusError::EmptyCorpus);
    }
    let mut seen = BTreeSet::new();
    for entry in &entries {
        if !seen.insert(entry.id.clone()) {
            return Err(CorpusError::DuplicateId {
                id: entry.id.clone(),
            });
        }
    }
    Ok(Corpus::from_entries(split, entries))
}

/// A broken corpus invariant, named so reports can point at the entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub entry_id: String,
    pub invariant: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.entry_id, self.invariant)
    }
}

/// Re-checks every corpus invariant; returns an empty list iff all hold.
/// Violations are data, not errors.
pub fn validate_corpus(corpus: &Corpus) -> Vec<Violation> {
    let mut violations = Vec::new();
    let mut seen: HashMap<&str, usize> = HashMap::new();
    for entry in &corpus.entries {
        *seen.entry(entry.id.as_str()).or_insert(0) += 1;
    }
    for (id, count) in seen.iter().filter(|(_, c)| **c > 1) {
        violations.push(Violation {
            entry_id: id.to_string(),
            invariant: format!("DuplicateId: id appears {count} times"),
        });
    }
    for entry in &corpus.entries {
        if entry.triples.is_empty() {
            violations.push(Violation {
                entry_id: entry.id.clone(),
                invariant: "entry has zero triples".to_string(),
            });
        }
        if entry.size != entry.triples.len() {
            violations.push(Violation {
                entry_id: entry.id.clone(),
                invariant: format!(
                    "declared size {} but entry holds {} triples",
                    entry.size,
                    entry.triples.len()
                ),
            });
        }
        for (i, triple) in entry.triples.iter().enumerate() {
            for (field, value) in [
                ("subject", &triple.subject),
                ("predicate", &triple.predicate),
                ("object", &triple.object),
            ] {
                if value.trim().is_empty() {
                    violations.push(Violation {
                        entry_id: entry.id.clone(),
                        invariant: format!("triple {i} has empty {field}"),
                    });
                }
            }
        }
        for (lang, texts) in &entry.references {
            if texts.iter().any(|t| t.is_empty()) {
                violations.push(Violation {
                    entry_id: entry.id.clone(),
                    invariant: format!("empty reference text for language {lang}"),
                });
            }
            if !corpus.languages.contains(lang) {
                violations.push(Violation {
                    entry_id: entry.id.clone(),
                    invariant: format!("language {lang} missing from corpus language set"),
                });
            }
        }
    }
    violations.sort_by(|a, b| (&a.entry_id, &a.invariant).cmp(&(&b.entry_id, &b.invariant)));
    violations
}

/// Draws `n` entries stratified by triple count, deterministically per seed.
///
/// Each stratum receives `floor(n * stratum_share)` slots; remainder slots go
/// to the largest strata first (ties to the smaller triple count). Selection
/// within a stratum is uniform under the seed. Output keeps corpus order.
pub fn stratified_sample(
    corpus: &Corpus,
    n: usize,
    seed: u64,
) -> Result<Vec<Entry>, CorpusError> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    if n > corpus.len() {
        return Err(CorpusError::SampleTooLarge {
            requested: n,
            available: corpus.len(),
        });
    }
    if corpus.is_empty() || n == 0 {
        return Ok(Vec::new());
    }

    // strata keyed by triple count, members in corpus order
    let mut strata: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (idx, entry) in corpus.entries.iter().enumerate() {
        strata.entry(entry.triple_count()).or_default().push(idx);
    }
    let total = corpus.len();

    let mut allocation: BTreeMap<usize, usize> = strata
        .iter()
        .map(|(&size, members)| (size, n * members.len() / total))
        .collect();
    let assigned: usize = allocation.values().sum();

    // remainder: largest strata first, ties to the smaller triple count
    let mut order: Vec<usize> = strata.keys().copied().collect();
    order.sort_by_key(|&size| (std::cmp::Reverse(strata[&size].len()), size));
    for &size in order.iter().take(n - assigned) {
        *allocation.get_mut(&size).unwrap() += 1;
    }

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut selected = Vec::with_capacity(n);
    for (&size, members) in &strata {
        let take = allocation[&size];
        let mut shuffled = members.clone();
        shuffled.shuffle(&mut rng);
        selected.extend(shuffled.into_iter().take(take));
    }
    selected.sort_unstable();
    Ok(selected
        .into_iter()
        .map(|idx| corpus.entries[idx].clone())
        .collect())
}
