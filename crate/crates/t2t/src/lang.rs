//! Language codes and the display-name registry used in prompts.

use serde::{Deserialize, Serialize};
use std::borrow::Borrow;
use std::collections::BTreeMap;
use std::fmt;

/// A short language code such as `en` or `ga`.
///
/// Codes are lowercase, nonempty, and contain no whitespace. The code alone
/// identifies a language; human-readable names live in [`LanguageRegistry`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LanguageCode(String);

impl LanguageCode {
    pub fn new(code: &str) -> Result<Self, InvalidLanguageCode> {
        let trimmed = code.trim();
        if trimmed.is_empty() || trimmed.chars().any(char::is_whitespace) {
            return Err(InvalidLanguageCode(code.to_string()));
        }
        Ok(Self(trimmed.to_lowercase()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn english() -> Self {
        Self("en".to_string())
    }

    pub fn is_english(&self) -> bool {
        self.0 == "en"
    }
}

impl fmt::Display for LanguageCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::str::FromStr for LanguageCode {
    type Err = InvalidLanguageCode;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::new(s)
    }
}

impl Borrow<str> for LanguageCode {
    fn borrow(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid language code {0:?}: must be nonempty without whitespace")]
pub struct InvalidLanguageCode(pub String);

/// Maps language codes to the display names substituted into prompt text
/// (`en` -> "English"). Pre-seeded with the five WebNLG'23 languages;
/// unknown codes can be registered at runtime and fall back to the code
/// itself as display name.
#[derive(Debug, Clone)]
pub struct LanguageRegistry {
    names: BTreeMap<LanguageCode, String>,
}

impl Default for LanguageRegistry {
    fn default() -> Self {
        let mut names = BTreeMap::new();
        for (code, name) in [
            ("en", "English"),
            ("ga", "Irish"),
            ("mt", "Maltese"),
            ("cy", "Welsh"),
            ("br", "Breton"),
        ] {
            names.insert(LanguageCode(code.to_string()), name.to_string());
        }
        Self { names }
    }
}

impl LanguageRegistry {
    pub fn display_name(&self, code: &LanguageCode) -> Option<&str> {
        self.names.get(code).map(String::as_str)
    }

    pub fn is_registered(&self, code: &LanguageCode) -> bool {
        self.names.contains_key(code)
    }

    pub fn register(&mut self, code: LanguageCode, display_name: impl Into<String>) {
        self.names.insert(code, display_name.into());
    }

    /// Registers `code` with itself as display name if unknown, warning once.
    pub fn ensure_registered(&mut self, code: &LanguageCode) -> &str {
        if !self.names.contains_key(code) {
            tracing::warn!(code = %code, "unknown language code; registering with code as display name");
            self.names.insert(code.clone(), code.as_str().to_string());
        }
        self.names.get(code).unwrap()
    }

    pub fn codes(&self) -> impl Iterator<Item = &LanguageCode> {
        self.names.keys()
    }
}
