//! Completion and translation services behind one contract, with replay
//! fixtures for offline runs, a persistent response cache, and usage
//! accounting.
//!
//! All network I/O in the workspace lives in this module. Callers go through
//! [`complete`] and [`translate`], which consult the cache first and apply
//! the backend's retry policy to transient failures.

mod cache;
mod ledger;
mod live;
mod replay;

pub use cache::{CacheError, CacheKey, ResponseCache};
pub use ledger::{ledger_report, ledger_total, LedgerEntry, LedgerReport};
pub use live::{HttpCompletionBackend, HttpTranslationBackend};
pub use replay::{EchoBackend, ReplayCompletionBackend, ReplayTranslationBackend};

use crate::lang::LanguageCode;
use crate::promptgen::Prompt;
use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use std::time::Duration;

/// Decoding parameters sent with every completion request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DecodingParams {
    pub temperature: f64,
    pub top_p: f64,
    pub frequency_penalty: f64,
    pub presence_penalty: f64,
    pub best_of: u32,
    pub max_length: u32,
}

impl Default for DecodingParams {
    fn default() -> Self {
        Self {
            temperature: 0.0,
            top_p: 1.0,
            frequency_penalty: 0.0,
            presence_penalty: 0.0,
            best_of: 1,
            max_length: 500,
        }
    }
}

/// Token counts as reported by the backend, plus the configured-price cost.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct UsageRecord {
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
    pub cost_estimate: f64,
}

/// Prices in currency units per 1000 tokens.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct UnitPrices {
    pub prompt_per_1k: f64,
    pub completion_per_1k: f64,
}

impl UnitPrices {
    pub fn cost(&self, prompt_tokens: u64, completion_tokens: u64) -> f64 {
        prompt_tokens as f64 * (self.prompt_per_1k / 1000.0)
            + completion_tokens as f64 * (self.completion_per_1k / 1000.0)
    }
}

/// One completion exactly as the backend returned it (no postprocessing).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionRecord {
    pub backend_id: String,
    pub model_id: String,
    pub prompt: String,
    pub params: DecodingParams,
    pub completion: String,
    pub usage: UsageRecord,
    pub timestamp: DateTime<Utc>,
}

/// A cached translation result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslationRecord {
    pub backend_id: String,
    pub text: String,
    pub source: LanguageCode,
    pub target: LanguageCode,
    pub translation: String,
    pub timestamp: DateTime<Utc>,
}

#[derive(Debug, thiserror::Error)]
pub enum BackendError {
    #[error("authentication failed: {0}")]
    Auth(String),
    #[error("rate limited: {0}")]
    RateLimited(String),
    #[error("transport failure: {0}")]
    Transport(String),
    #[error("backend refused request: {0}")]
    Refused(String),
    #[error("language {0} not supported by this backend")]
    UnsupportedLanguage(LanguageCode),
    #[error("source and target language are both {0}")]
    SameLanguage(LanguageCode),
    #[error(transparent)]
    Cache(#[from] CacheError),
}

impl BackendError {
    /// Transient failures are worth retrying; everything else is final.
    pub fn is_transient(&self) -> bool {
        matches!(self, BackendError::RateLimited(_) | BackendError::Transport(_))
    }
}

/// Bounded exponential backoff. `max_attempts` counts the first try.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    pub base_delay_ms: u64,
    pub max_delay_ms: u64,
}

impl RetryPolicy {
    /// Single attempt, no waiting. The default for offline backends.
    pub fn none() -> Self {
        Self {
            max_attempts: 1,
            base_delay_ms: 0,
            max_delay_ms: 0,
        }
    }

    pub fn run<T>(
        &self,
        mut op: impl FnMut() -> Result<T, BackendError>,
    ) -> Result<T, BackendError> {
        let attempts = self.max_attempts.max(1);
        let mut delay = self.base_delay_ms;
        for attempt in 1..=attempts {
            match op() {
                Ok(value) => return Ok(value),
                Err(err) if err.is_transient() && attempt < attempts => {
                    tracing::warn!(attempt, error = %err, "transient backend failure, backing off");
                    std::thread::sleep(Duration::from_millis(delay.min(self.max_delay_ms)));
                    delay = (delay.saturating_mul(2)).min(self.max_delay_ms.max(1));
                }
                Err(err) => return Err(err),
            }
        }
        unreachable!("retry loop returns on last attempt");
    }
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self {
            max_attempts: 5,
            base_delay_ms: 500,
            max_delay_ms: 10_000,
        }
    }
}

/// A backend's answer to one raw completion attempt.
#[derive(Debug, Clone, PartialEq)]
pub struct RawCompletion {
    pub completion: String,
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
}

pub trait CompletionBackend: Send + Sync {
    fn id(&self) -> &str;
    fn model_id(&self) -> &str;
    /// One attempt, no cache, no retry.
    fn complete_raw(&self, prompt: &str, params: &DecodingParams)
        -> Result<RawCompletion, BackendError>;
    fn unit_prices(&self) -> UnitPrices {
        UnitPrices::default()
    }
    fn retry_policy(&self) -> RetryPolicy {
        RetryPolicy::none()
    }
}

pub trait TranslationBackend: Send + Sync {
    fn id(&self) -> &str;
    fn supports(&self, language: &LanguageCode) -> bool;
    /// One attempt, no cache, no retry.
    fn translate_raw(
        &self,
        text: &str,
        source: &LanguageCode,
        target: &LanguageCode,
    ) -> Result<String, BackendError>;
    fn retry_policy(&self) -> RetryPolicy {
        RetryPolicy::none()
    }
}

/// Completes `prompt`, consulting `cache` first and populating it on
/// success. Transient failures are retried per the backend's policy. The
/// returned record holds the completion exactly as the backend produced it.
pub fn complete(
    prompt: &Prompt,
    params: &DecodingParams,
    backend: &dyn CompletionBackend,
    cache: Option<&ResponseCache>,
) -> Result<CompletionRecord, BackendError> {
    let key = CacheKey::for_completion(backend.id(), backend.model_id(), &prompt.text, params);
    if let Some(cache) = cache {
        match cache.lookup::<CompletionRecord>(&key) {
            Ok(Some(record)) => return Ok(record),
            Ok(None) => {}
            Err(err) => tracing::warn!(key = key.as_hex(), error = %err, "ignoring corrupt cache entry"),
        }
    }
    let raw = backend
        .retry_policy()
        .run(|| backend.complete_raw(&prompt.text, params))?;
    let prices = backend.unit_prices();
    let record = CompletionRecord {
        backend_id: backend.id().to_string(),
        model_id: backend.model_id().to_string(),
        prompt: prompt.text.clone(),
        params: params.clone(),
        completion: raw.completion,
        usage: UsageRecord {
            prompt_tokens: raw.prompt_tokens,
            completion_tokens: raw.completion_tokens,
            cost_estimate: prices.cost(raw.prompt_tokens, raw.completion_tokens),
        },
        timestamp: Utc::now(),
    };
    if let Some(cache) = cache {
        cache.store(&key, &record)?;
    }
    Ok(record)
}

/// Translates `text`, cached identically to completions.
pub fn translate(
    text: &str,
    source: &LanguageCode,
    target: &LanguageCode,
    backend: &dyn TranslationBackend,
    cache: Option<&ResponseCache>,
) -> Result<String, BackendError> {
    if source == target {
        return Err(BackendError::SameLanguage(source.clone()));
    }
    if !backend.supports(target) {
        return Err(BackendError::UnsupportedLanguage(target.clone()));
    }
    let key = CacheKey::for_translation(backend.id(), source, target, text);
    if let Some(cache) = cache {
        match cache.lookup::<TranslationRecord>(&key) {
            Ok(Some(record)) => return Ok(record.translation),
            Ok(None) => {}
            Err(err) => tracing::warn!(key = key.as_hex(), error = %err, "ignoring corrupt cache entry"),
        }
    }
    let translation = backend
        .retry_policy()
        .run(|| backend.translate_raw(text, source, target))?;
    let record = TranslationRecord {
        backend_id: backend.id().to_string(),
        text: text.to_string(),
        source: source.clone(),
        target: target.clone(),
        translation: translation.clone(),
        timestamp: Utc::now(),
    };
    if let Some(cache) = cache {
        cache.store(&key, &record)?;
    }
    Ok(translation)
}
