//! Flat JSONL corpus format: one entry object per line.
//!
//! Schema: `{"id": str, "category": str?, "triples": [{"subject","predicate",
//! "object"}...], "references": {"<lang>": [str, ...]}}`. A `size` key is
//! accepted on input (the declared triple count) but never required.

use super::{CorpusError, Entry, Split, Triple};
use crate::lang::LanguageCode;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Serialize, Deserialize)]
struct WireEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    category: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    size: Option<usize>,
    triples: Vec<Triple>,
    #[serde(default)]
    references: BTreeMap<LanguageCode, Vec<String>>,
}

pub(super) fn parse_entries(text: &str, split: Split) -> Result<Vec<Entry>, CorpusError> {
    let mut entries = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let wire: WireEntry =
            serde_json::from_str(line).map_err(|e| CorpusError::Parse {
                locus: format!("line {}", lineno + 1),
                message: e.to_string(),
            })?;
        let index = entries.len();
        entries.push(Entry {
            id: wire.id.unwrap_or_else(|| format!("{split}-{index}")),
            category: wire.category,
            size: wire.size.unwrap_or(wire.triples.len()),
            triples: wire.triples,
            references: wire.references,
        });
    }
    Ok(entries)
}

/// Serializes entries back to the JSONL wire format, one per line with a
/// trailing newline. Reloading the output reproduces the same entries.
pub fn entries_to_jsonl(entries: &[Entry]) -> String {
    let mut out = String::new();
    for entry in entries {
        let wire = WireEntry {
            id: Some(entry.id.clone()),
            category: entry.category.clone(),
            size: Some(entry.size),
            triples: entry.triples.clone(),
            references: entry.references.clone(),
        };
        out.push_str(&serde_json::to_string(&wire).expect("entry serializes"));
        out.push('\n');
    }
    out
}
