//! WebNLG benchmark XML reader.
//!
//! Recognizes `<entry>` elements carrying `eid`/`category`/`size` attributes,
//! `<mtriple>` children of the form `Subject | predicate | Object`
//! (pipe-separated, whitespace-trimmed) and `<lex lang="...">` reference
//! texts. Any surrounding structure (`<benchmark>`, `<entries>`,
//! `<modifiedtripleset>`) is traversed without being interpreted.

use super::{CorpusError, Entry, Split, Triple};
use crate::lang::LanguageCode;
use std::collections::BTreeMap;
use xml::attribute::OwnedAttribute;
use xml::common::Position;
use xml::reader::{EventReader, XmlEvent};

struct PendingEntry {
    id: Option<String>,
    category: Option<String>,
    size: Option<usize>,
    triples: Vec<Triple>,
    references: BTreeMap<LanguageCode, Vec<String>>,
}

pub(super) fn parse_entries(text: &str, split: Split) -> Result<Vec<Entry>, CorpusError> {
    let reader = EventReader::from_str(text);
    let mut entries: Vec<Entry> = Vec::new();
    let mut current: Option<PendingEntry> = None;
    // set while inside an <mtriple> or <lex lang="..."> element
    let mut capture: Option<(String, Option<LanguageCode>)> = None;
    let mut buffer = String::new();

    for event in reader {
        let event = event.map_err(|e| CorpusError::Parse {
            locus: e.position().to_string(),
            message: e.msg().to_string(),
        })?;
        match event {
            XmlEvent::StartElement {
                name, attributes, ..
            } => match name.local_name.as_str() {
                "entry" => {
                    current = Some(PendingEntry {
                        id: attr(&attributes, "eid").or_else(|| attr(&attributes, "id")),
                        category: attr(&attributes, "category"),
                        size: attr(&attributes, "size").and_then(|s| s.parse().ok()),
                        triples: Vec::new(),
                        references: BTreeMap::new(),
                    });
                }
                "mtriple" if current.is_some() => {
                    capture = Some(("mtriple".to_string(), None));
                    buffer.clear();
                }
                "lex" if current.is_some() => {
                    let lang = attr(&attributes, "lang")
                        .and_then(|code| LanguageCode::new(&code).ok());
                    capture = Some(("lex".to_string(), lang));
                    buffer.clear();
                }
                _ => {}
            },
            XmlEvent::Characters(chunk) | XmlEvent::CData(chunk) => {
                if capture.is_some() {
                    buffer.push_str(&chunk);
                }
            }
            XmlEvent::EndElement { name } => match name.local_name.as_str() {
                "mtriple" => {
                    if let (Some(entry), Some(_)) = (current.as_mut(), capture.take()) {
                        entry.triples.push(parse_mtriple(&buffer, entries.len())?);
                    }
                }
                "lex" => {
                    if let (Some(entry), Some((_, lang))) = (current.as_mut(), capture.take()) {
                        let text = buffer.trim().to_string();
                        if let (Some(lang), false) = (lang, text.is_empty()) {
                            entry.references.entry(lang).or_default().push(text);
                        }
                    }
                }
                "entry" => {
                    if let Some(pending) = current.take() {
                        let index = entries.len();
                        entries.push(Entry {
                            id: pending.id.unwrap_or_else(|| format!("{split}-{index}")),
                            category: pending.category,
                            size: pending.size.unwrap_or(pending.triples.len()),
                            triples: pending.triples,
                            references: pending.references,
                        });
                    }
                }
                _ => {}
            },
            _ => {}
        }
    }
    Ok(entries)
}

fn attr(attributes: &[OwnedAttribute], name: &str) -> Option<String> {
    attributes
        .iter()
        .find(|a| a.name.local_name == name)
        .map(|a| a.value.clone())
}

fn parse_mtriple(raw: &str, entry_index: usize) -> Result<Triple, CorpusError> {
    let parts: Vec<&str> = raw.splitn(3, '|').map(str::trim).collect();
    if parts.len() != 3 || parts.iter().any(|p| p.is_empty()) {
        return Err(CorpusError::Parse {
            locus: format!("entry {entry_index}"),
            message: format!("malformed mtriple {raw:?}: expected `Subject | predicate | Object`"),
        });
    }
    Ok(Triple::new(parts[0], parts[1], parts[2]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{load_corpus_str, CorpusFormat};

    const SAMPLE: &str = r#"<?xml version="1.0" encoding="utf-8"?>
<benchmark>
  <entries>
    <entry category="Airport" eid="Id1" size="1">
      <modifiedtripleset>
        <mtriple>Aarhus_Airport | cityServed | "Aarhus, Denmark"</mtriple>
      </modifiedtripleset>
      <lex lid="Id1" lang="en">Aarhus Airport serves the city of Aarhus, Denmark.</lex>
      <lex lid="Id2" lang="ga">Freastalaíonn Aerfort Aarhus ar chathair Aarhus, an Danmhairg.</lex>
    </entry>
    <entry category="Building" eid="Id2" size="2">
      <modifiedtripleset>
        <mtriple>AC_Hotel_Bella_Sky_Copenhagen | owner | Bella_Center</mtriple>
        <mtriple>AC_Hotel_Bella_Sky_Copenhagen | floorCount | 23</mtriple>
      </modifiedtripleset>
      <lex lid="Id1" lang="en">The AC Hotel Bella Sky Copenhagen is owned by Bella Center and has 23 floors.</lex>
    </entry>
  </entries>
</benchmark>"#;

    #[test]
    fn parses_entries_triples_and_lex_by_language() {
        let corpus = load_corpus_str(SAMPLE, CorpusFormat::WebnlgXml, Split::Dev).unwrap();
        assert_eq!(corpus.len(), 2);
        let first = &corpus.entries[0];
        assert_eq!(first.id, "Id1");
        assert_eq!(first.category.as_deref(), Some("Airport"));
        assert_eq!(first.size, 1);
        assert_eq!(first.triples[0].object, "\"Aarhus, Denmark\"");
        let ga = LanguageCode::new("ga").unwrap();
        assert_eq!(first.references_for(&ga).len(), 1);
        assert!(corpus.languages.contains(&ga));

        let second = &corpus.entries[1];
        assert_eq!(second.triples.len(), 2);
        assert_eq!(second.triples[1].predicate, "floorCount");
    }

    #[test]
    fn malformed_mtriple_is_a_parse_error() {
        let bad = r#"<benchmark><entries><entry eid="Id1"><mtriple>only-two | parts</mtriple></entry></entries></benchmark>"#;
        assert!(matches!(
            load_corpus_str(bad, CorpusFormat::WebnlgXml, Split::Dev),
            Err(CorpusError::Parse { .. })
        ));
    }

    #[test]
    fn unclosed_document_is_a_parse_error_with_position() {
        let bad = "<benchmark><entries><entry eid=\"Id1\">";
        match load_corpus_str(bad, CorpusFormat::WebnlgXml, Split::Dev) {
            Err(CorpusError::Parse { locus, .. }) => assert!(!locus.is_empty()),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn entry_without_eid_gets_synthesized_id() {
        let doc = r#"<benchmark><entries><entry><mtriple>a | b | c</mtriple></entry></entries></benchmark>"#;
        let corpus = load_corpus_str(doc, CorpusFormat::WebnlgXml, Split::Test).unwrap();
        assert_eq!(corpus.entries[0].id, "test-0");
    }
}
