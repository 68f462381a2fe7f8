//! Persistent response cache: one JSON file per key, body checksummed.
//!
//! Stores are atomic (write to a temp file, then rename), so readers never
//! observe torn entries and concurrent writers of the same key settle on one
//! complete file. Corrupt entries are reported and treated as absent.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

/// Digest of (kind, backend id, model id, canonical params, payload bytes).
/// Any byte difference in the payload yields a different key.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheKey(String);

impl CacheKey {
    pub fn for_completion(
        backend_id: &str,
        model_id: &str,
        prompt: &str,
        params: &impl Serialize,
    ) -> Self {
        let params_json = serde_json::to_string(params).expect("params serialize");
        Self(digest(&[
            b"completion",
            backend_id.as_bytes(),
            model_id.as_bytes(),
            params_json.as_bytes(),
            prompt.as_bytes(),
        ]))
    }

    pub fn for_translation(
        backend_id: &str,
        source: &crate::lang::LanguageCode,
        target: &crate::lang::LanguageCode,
        text: &str,
    ) -> Self {
        Self(digest(&[
            b"translation",
            backend_id.as_bytes(),
            source.as_str().as_bytes(),
            target.as_str().as_bytes(),
            text.as_bytes(),
        ]))
    }

    pub fn as_hex(&self) -> &str {
        &self.0
    }
}

/// Length-prefixed field hashing; no two field splits collide.
fn digest(fields: &[&[u8]]) -> String {
    let mut hasher = Sha256::new();
    for field in fields {
        hasher.update((field.len() as u64).to_be_bytes());
        hasher.update(field);
    }
    hex_encode(&hasher.finalize())
}

fn hex_encode(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache I/O failure at {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("corrupt cache entry at {path}: checksum mismatch")]
    Corrupt { path: String },
    #[error("unreadable cache entry at {path}: {message}")]
    Malformed { path: String, message: String },
}

#[derive(Serialize, Deserialize)]
struct Envelope<'a> {
    checksum: String,
    #[serde(borrow)]
    body: &'a serde_json::value::RawValue,
}

static TEMP_COUNTER: AtomicU64 = AtomicU64::new(0);

/// File-backed cache under one directory; filenames are hex digests.
#[derive(Debug, Clone)]
pub struct ResponseCache {
    dir: PathBuf,
}

impl ResponseCache {
    /// Opens (creating if needed) a cache directory.
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, CacheError> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir).map_err(|source| CacheError::Io {
            path: dir.display().to_string(),
            source,
        })?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn entry_path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{}.json", key.as_hex()))
    }

    /// Returns the stored value bit-exactly, `None` when never stored, or
    /// `CacheError::Corrupt` when the checksum no longer matches.
    pub fn lookup<T: DeserializeOwned>(&self, key: &CacheKey) -> Result<Option<T>, CacheError> {
        let path = self.entry_path(key);
        let raw = match std::fs::read_to_string(&path) {
            Ok(raw) => raw,
            Err(err) if err.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(source) => {
                return Err(CacheError::Io {
                    path: path.display().to_string(),
                    source,
                })
            }
        };
        let envelope: Envelope<'_> =
            serde_json::from_str(&raw).map_err(|e| CacheError::Malformed {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
        let body = envelope.body.get();
        if hex_encode(&Sha256::digest(body.as_bytes())) != envelope.checksum {
            return Err(CacheError::Corrupt {
                path: path.display().to_string(),
            });
        }
        let value = serde_json::from_str(body).map_err(|e| CacheError::Malformed {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Ok(Some(value))
    }

    /// Atomic write: temp file in the same directory, then rename.
    pub fn store<T: Serialize>(&self, key: &CacheKey, value: &T) -> Result<(), CacheError> {
        let body = serde_json::to_string(value).expect("cache value serializes");
        let checksum = hex_encode(&Sha256::digest(body.as_bytes()));
        let file = format!("{{\"checksum\":{},\"body\":{body}}}", serde_json::to_string(&checksum).unwrap());
        let path = self.entry_path(key);
        let tmp = self.dir.join(format!(
            ".tmp-{}-{}-{}",
            std::process::id(),
            TEMP_COUNTER.fetch_add(1, Ordering::Relaxed),
            key.as_hex()
        ));
        let io_err = |source| CacheError::Io {
            path: path.display().to_string(),
            source,
        };
        std::fs::write(&tmp, file).map_err(io_err)?;
        std::fs::rename(&tmp, &path).map_err(io_err)?;
        Ok(())
    }

    pub fn remove(&self, key: &CacheKey) -> Result<bool, CacheError> {
        let path = self.entry_path(key);
        match std::fs::remove_file(&path) {
            Ok(()) => Ok(true),
            Err(err) if err.kind() == std::io::ErrorKind::NotFound => Ok(false),
            Err(source) => Err(CacheError::Io {
                path: path.display().to_string(),
                source,
            }),
        }
    }

    /// Hex digests of all stored entries, sorted.
    pub fn keys(&self) -> Result<Vec<String>, CacheError> {
        let mut keys = Vec::new();
        let read = std::fs::read_dir(&self.dir).map_err(|source| CacheError::Io {
            path: self.dir.display().to_string(),
            source,
        })?;
        for dirent in read {
            let dirent = dirent.map_err(|source| CacheError::Io {
                path: self.dir.display().to_string(),
                source,
            })?;
            let name = dirent.file_name().to_string_lossy().to_string();
            if let Some(stem) = name.strip_suffix(".json") {
                keys.push(stem.to_string());
            }
        }
        keys.sort();
        Ok(keys)
    }

    pub fn clear(&self) -> Result<usize, CacheError> {
        let keys = self.keys()?;
        for key in &keys {
            let _ = std::fs::remove_file(self.dir.join(format!("{key}.json")));
        }
        Ok(keys.len())
    }
}
