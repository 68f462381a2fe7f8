//! Prompt construction: triple linearization plus the zero-shot and
//! few-shot templates.
//!
//! Layout is canonical and byte-stable: `\n` line endings, one blank line
//! between the instruction, the triple block, and the text slot. Equal
//! inputs always produce identical prompt bytes. Underscores in triples are
//! kept verbatim; cleanup belongs to postprocessing of model outputs.

use crate::corpus::{Entry, Triple};
use crate::lang::{LanguageCode, LanguageRegistry};
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::sync::OnceLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PromptMode {
    ZeroShot,
    FewShot,
}

/// Whether the triple block is fenced by `"""` delimiter lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quoting {
    #[default]
    TripleQuotes,
    None,
}

/// A worked input/output pair shown before the query in few-shot prompts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FewShotExample {
    pub triples: Vec<Triple>,
    pub text: String,
}

/// Everything that determines a prompt's bytes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptSpec {
    pub mode: PromptMode,
    pub target_language: LanguageCode,
    pub quoting: Quoting,
    pub examples: Vec<FewShotExample>,
}

/// The exact string sent to a completion backend, with provenance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prompt {
    pub text: String,
    pub spec: PromptSpec,
    pub entry_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PromptError {
    #[error("entry {0:?} has no triples")]
    EmptyEntry(String),
    #[error("few-shot prompt requires at least one example")]
    NoExamples,
    #[error("no curated default examples for language {0:?}")]
    NoDefaults(String),
}

/// Renders a triple as `subject predicate object`, fields verbatim.
pub fn linearize(triple: &Triple) -> String {
    format!("{} {} {}", triple.subject, triple.predicate, triple.object)
}

fn instruction_line(language: &LanguageCode, registry: &LanguageRegistry) -> String {
    let display = registry
        .display_name(language)
        .unwrap_or_else(|| language.as_str());
    format!("Write the following triples as fluent {display} text.")
}

fn triple_block(triples: &[Triple]) -> String {
    triples
        .iter()
        .map(linearize)
        .collect::<Vec<_>>()
        .join("\n")
}

/// Builds the minimal-instruction prompt for one entry.
pub fn build_zero_shot(
    entry: &Entry,
    language: &LanguageCode,
    quoting: Quoting,
    registry: &LanguageRegistry,
) -> Result<Prompt, PromptError> {
    if entry.triples.is_empty() {
        return Err(PromptError::EmptyEntry(entry.id.clone()));
    }
    let mut text = instruction_line(language, registry);
    text.push_str("\n\n");
    match quoting {
        Quoting::TripleQuotes => {
            let _ = write!(text, "Triples: \"\"\"\n{}\n\"\"\"", triple_block(&entry.triples));
        }
        Quoting::None => {
            let _ = write!(text, "Triples:\n{}", triple_block(&entry.triples));
        }
    }
    text.push_str("\n\nText:");
    Ok(Prompt {
        text,
        spec: PromptSpec {
            mode: PromptMode::ZeroShot,
            target_language: language.clone(),
            quoting,
            examples: Vec::new(),
        },
        entry_id: entry.id.clone(),
    })
}

/// Builds the in-context prompt: numbered example blocks, a `##` line after
/// each, then the query entry as the final block with an open text slot.
pub fn build_few_shot(
    entry: &Entry,
    examples: &[FewShotExample],
    language: &LanguageCode,
    registry: &LanguageRegistry,
) -> Result<Prompt, PromptError> {
    if examples.is_empty() {
        return Err(PromptError::NoExamples);
    }
    if entry.triples.is_empty() {
        return Err(PromptError::EmptyEntry(entry.id.clone()));
    }
    let mut text = instruction_line(language, registry);
    text.push_str("\n\n");
    for (i, example) in examples.iter().enumerate() {
        let _ = write!(
            text,
            "Triple {k}: \"\"\"\n{block}\n\"\"\"\nText {k}: {answer}\n##\n",
            k = i + 1,
            block = triple_block(&example.triples),
            answer = example.text,
        );
    }
    let _ = write!(
        text,
        "Triple {k}: \"\"\"\n{block}\n\"\"\"\nText {k}:",
        k = examples.len() + 1,
        block = triple_block(&entry.triples),
    );
    Ok(Prompt {
        text,
        spec: PromptSpec {
            mode: PromptMode::FewShot,
            target_language: language.clone(),
            quoting: Quoting::TripleQuotes,
            examples: examples.to_vec(),
        },
        entry_id: entry.id.clone(),
    })
}

static CURATED: OnceLock<Vec<Entry>> = OnceLock::new();

fn curated_entries() -> &'static [Entry] {
    CURATED.get_or_init(|| {
        let raw = include_str!("../data/default_examples.jsonl");
        crate::corpus::load_corpus_str(raw, crate::corpus::CorpusFormat::Jsonl, crate::corpus::Split::Dev)
            .expect("bundled default examples parse")
            .entries
    })
}

/// The fixed pair of curated examples for `language`, in file order:
/// runway + journal triple sets for en/ga/br, Albennie Jones + GMA New
/// Media for mt/cy.
pub fn default_examples(language: &LanguageCode) -> Result<Vec<FewShotExample>, PromptError> {
    let examples = examples_for_language(curated_entries(), language);
    if examples.is_empty() {
        return Err(PromptError::NoDefaults(language.as_str().to_string()));
    }
    Ok(examples)
}

/// Selects examples from entries in the JSONL entry schema: every entry
/// carrying a reference in `language` contributes (triples, first
/// reference), in entry order.
pub fn examples_for_language(entries: &[Entry], language: &LanguageCode) -> Vec<FewShotExample> {
    entries
        .iter()
        .filter_map(|entry| {
            entry.references_for(language).first().map(|text| FewShotExample {
                triples: entry.triples.clone(),
                text: text.clone(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn lang(code: &str) -> LanguageCode {
        LanguageCode::new(code).unwrap()
    }

    fn ac_hotel() -> Entry {
        Entry::new(
            "ac-hotel",
            None,
            vec![
                Triple::new("AC_Hotel_Bella_Sky_Copenhagen", "owner", "Bella_Center"),
                Triple::new("AC_Hotel_Bella_Sky_Copenhagen", "tenant", "Marriott_International"),
                Triple::new("AC_Hotel_Bella_Sky_Copenhagen", "architect", "3XN"),
                Triple::new("AC_Hotel_Bella_Sky_Copenhagen", "floorCount", "23"),
            ],
            BTreeMap::new(),
        )
    }

    #[test]
    fn linearize_keeps_fields_verbatim() {
        assert_eq!(
            linearize(&Triple::new("AC_Hotel_Bella_Sky_Copenhagen", "floorCount", "23")),
            "AC_Hotel_Bella_Sky_Copenhagen floorCount 23"
        );
        assert_eq!(
            linearize(&Triple::new(
                "Adolfo_Suárez_Madrid–Barajas_Airport",
                "runwayName",
                "\"14R/32L\""
            )),
            "Adolfo_Suárez_Madrid–Barajas_Airport runwayName \"14R/32L\""
        );
        assert_eq!(linearize(&Triple::new("a", "b", "c")), "a b c");
    }

    #[test]
    fn zero_shot_layout_is_byte_exact() {
        let registry = LanguageRegistry::default();
        let prompt =
            build_zero_shot(&ac_hotel(), &lang("en"), Quoting::TripleQuotes, &registry).unwrap();
        let expected = "Write the following triples as fluent English text.\n\
\n\
Triples: \"\"\"\n\
AC_Hotel_Bella_Sky_Copenhagen owner Bella_Center\n\
AC_Hotel_Bella_Sky_Copenhagen tenant Marriott_International\n\
AC_Hotel_Bella_Sky_Copenhagen architect 3XN\n\
AC_Hotel_Bella_Sky_Copenhagen floorCount 23\n\
\"\"\"\n\
\n\
Text:";
        assert_eq!(prompt.text, expected);
    }

    #[test]
    fn zero_shot_without_quotes_drops_delimiter_lines() {
        let registry = LanguageRegistry::default();
        let entry = Entry::new("e", None, vec![Triple::new("a", "b", "c")], BTreeMap::new());
        let prompt = build_zero_shot(&entry, &lang("ga"), Quoting::None, &registry).unwrap();
        assert_eq!(
            prompt.text,
            "Write the following triples as fluent Irish text.\n\nTriples:\na b c\n\nText:"
        );
        assert!(!prompt.text.contains("\"\"\""));
    }

    #[test]
    fn zero_shot_is_deterministic() {
        let registry = LanguageRegistry::default();
        let a = build_zero_shot(&ac_hotel(), &lang("cy"), Quoting::TripleQuotes, &registry).unwrap();
        let b = build_zero_shot(&ac_hotel(), &lang("cy"), Quoting::TripleQuotes, &registry).unwrap();
        assert_eq!(a.text, b.text);
    }

    #[test]
    fn empty_entry_is_rejected() {
        let registry = LanguageRegistry::default();
        let empty = Entry::new("empty", None, vec![], BTreeMap::new());
        assert!(matches!(
            build_zero_shot(&empty, &lang("en"), Quoting::TripleQuotes, &registry),
            Err(PromptError::EmptyEntry(_))
        ));
        let examples = default_examples(&lang("en")).unwrap();
        assert!(matches!(
            build_few_shot(&empty, &examples, &lang("en"), &registry),
            Err(PromptError::EmptyEntry(_))
        ));
    }

    #[test]
    fn few_shot_numbering_separators_and_terminator() {
        let registry = LanguageRegistry::default();
        let examples = default_examples(&lang("en")).unwrap();
        let prompt = build_few_shot(&ac_hotel(), &examples, &lang("en"), &registry).unwrap();
        assert!(prompt.text.starts_with("Write the following triples as fluent English text.\n\n"));
        assert!(prompt.text.contains("Triple 1: \"\"\"\n"));
        assert!(prompt.text.contains("Triple 2: \"\"\"\n"));
        assert!(prompt.text.ends_with("Text 3:"));
        let separators = prompt.text.lines().filter(|l| *l == "##").count();
        assert_eq!(separators, 2);
        assert!(prompt.text.contains(
            "Text 1: 14R/32L is the runway name of Adolfo Suárez Madrid-Barajas Airport.\n##\n"
        ));
    }

    #[test]
    fn few_shot_single_example_has_one_separator() {
        let registry = LanguageRegistry::default();
        let examples = vec![FewShotExample {
            triples: vec![Triple::new("x", "y", "z")],
            text: "Some text.".to_string(),
        }];
        let entry = Entry::new("q", None, vec![Triple::new("a", "b", "c")], BTreeMap::new());
        let prompt = build_few_shot(&entry, &examples, &lang("en"), &registry).unwrap();
        assert!(prompt.text.contains("Triple 1: \"\"\""));
        assert!(prompt.text.contains("Triple 2: \"\"\""));
        assert!(prompt.text.ends_with("Text 2:"));
        assert_eq!(prompt.text.lines().filter(|l| *l == "##").count(), 1);
    }

    #[test]
    fn few_shot_without_examples_is_rejected() {
        let registry = LanguageRegistry::default();
        assert!(matches!(
            build_few_shot(&ac_hotel(), &[], &lang("en"), &registry),
            Err(PromptError::NoExamples)
        ));
    }

    #[test]
    fn default_examples_match_curated_texts() {
        let en = default_examples(&lang("en")).unwrap();
        assert_eq!(en.len(), 2);
        assert_eq!(
            en[0].text,
            "14R/32L is the runway name of Adolfo Suárez Madrid-Barajas Airport."
        );
        assert_eq!(en[0].triples.len(), 1);
        assert_eq!(en[1].triples.len(), 3);

        let cy = default_examples(&lang("cy")).unwrap();
        assert_eq!(cy[0].text, "Ganed Albennie Jones yn Errata, Mississippi.");
        assert_eq!(cy[0].triples[0].subject, "Albennie_Jones");

        let ga = default_examples(&lang("ga")).unwrap();
        assert_eq!(
            ga[0].text,
            "14R/32L is ainm do rúidbhealach Aerfort Adolfo Suárez Madrid-Barajas"
        );
    }

    #[test]
    fn unregistered_language_has_no_defaults() {
        assert!(matches!(
            default_examples(&lang("xx")),
            Err(PromptError::NoDefaults(code)) if code == "xx"
        ));
    }

    #[test]
    fn unknown_language_falls_back_to_code_in_instruction() {
        let registry = LanguageRegistry::default();
        let entry = Entry::new("e", None, vec![Triple::new("a", "b", "c")], BTreeMap::new());
        let prompt = build_zero_shot(&entry, &lang("xx"), Quoting::TripleQuotes, &registry).unwrap();
        assert!(prompt.text.starts_with("Write the following triples as fluent xx text."));
    }
}
