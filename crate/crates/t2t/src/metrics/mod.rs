//! Self-contained corpus-level BLEU, ChrF++, and TER with multi-reference
//! support.
//!
//! Scales follow the usual reporting conventions: BLEU on 0-100, ChrF++ on
//! 0-1, TER on 0-1 (and above when hypotheses need more edits than the
//! reference has words). Case folding is off everywhere by default; the
//! bundle-level `lowercase` flag flips all three metrics at once.

mod bleu;
mod chrf;
mod ter;
mod tokenize;

pub use bleu::{corpus_bleu, sentence_bleu_smoothed};
pub use chrf::chrf;
pub use ter::ter;
pub use tokenize::tokenize;

use serde::{Deserialize, Serialize};

/// One hypothesis with its reference texts. References must be nonempty;
/// the hypothesis may be empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SegmentPair {
    pub hypothesis: String,
    pub references: Vec<String>,
}

impl SegmentPair {
    pub fn new(hypothesis: impl Into<String>, references: Vec<String>) -> Result<Self, MetricsError> {
        if references.is_empty() {
            return Err(MetricsError::NoReferences);
        }
        Ok(Self {
            hypothesis: hypothesis.into(),
            references,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BleuConfig {
    pub max_order: usize,
}

impl Default for BleuConfig {
    fn default() -> Self {
        Self { max_order: 4 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ChrfConfig {
    pub char_order: usize,
    pub word_order: usize,
    pub beta: f64,
}

impl Default for ChrfConfig {
    fn default() -> Self {
        Self {
            char_order: 6,
            word_order: 2,
            beta: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TerConfig {
    pub case_sensitive: bool,
    pub max_shift_size: usize,
    pub max_shift_distance: usize,
}

impl Default for TerConfig {
    fn default() -> Self {
        Self {
            case_sensitive: true,
            max_shift_size: 10,
            max_shift_distance: 50,
        }
    }
}

/// Configuration bundle for [`evaluate_all`].
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct MetricConfigs {
    pub bleu: BleuConfig,
    pub chrf: ChrfConfig,
    pub ter: TerConfig,
    /// Lowercase every hypothesis and reference before scoring.
    pub lowercase: bool,
}

/// The three corpus scores on their reporting scales.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricScore {
    pub bleu: f64,
    pub chrf: f64,
    pub ter: f64,
}

/// [`MetricScore`] plus segment count, as serialized in `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub bleu: f64,
    pub chrf: f64,
    pub ter: f64,
    pub n_segments: usize,
}

impl MetricReport {
    pub fn new(score: MetricScore, n_segments: usize) -> Self {
        Self {
            bleu: score.bleu,
            chrf: score.chrf,
            ter: score.ter,
            n_segments,
        }
    }

    pub fn score(&self) -> MetricScore {
        MetricScore {
            bleu: self.bleu,
            chrf: self.chrf,
            ter: self.ter,
        }
    }

    /// Aligned plain-text rendering, stable across runs.
    pub fn to_table(&self) -> String {
        format!(
            "metric    value\n------    ---------\nBLEU      {:>9.4}\nChrF++    {:>9.4}\nTER       {:>9.4}\nsegments  {:>9}\n",
            self.bleu, self.chrf, self.ter, self.n_segments
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricsError {
    #[error("no segment pairs to score")]
    EmptyInput,
    #[error("segment has no references")]
    NoReferences,
    #[error("a reference has zero tokens")]
    EmptyReference,
}

/// Runs all three metrics over the same pairs.
pub fn evaluate_all(pairs: &[SegmentPair], configs: &MetricConfigs) -> Result<MetricScore, MetricsError> {
    let lowered: Vec<SegmentPair>;
    let pairs = if configs.lowercase {
        lowered = pairs
            .iter()
            .map(|p| SegmentPair {
                hypothesis: p.hypothesis.to_lowercase(),
                references: p.references.iter().map(|r| r.to_lowercase()).collect(),
            })
            .collect();
        &lowered[..]
    } else {
        pairs
    };
    Ok(MetricScore {
        bleu: corpus_bleu(pairs, &configs.bleu)?,
        chrf: chrf(pairs, &configs.chrf)?,
        ter: ter(pairs, &configs.ter)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(hyp: &str, refs: &[&str]) -> SegmentPair {
        SegmentPair::new(hyp, refs.iter().map(|r| r.to_string()).collect()).unwrap()
    }

    #[test]
    fn perfect_outputs_hit_all_three_ideals() {
        let pairs = vec![
            pair("the cat sat on the mat today", &["the cat sat on the mat today"]),
            pair("he read a good book", &["he read a good book"]),
        ];
        let score = evaluate_all(&pairs, &MetricConfigs::default()).unwrap();
        assert!((score.bleu - 100.0).abs() < 1e-12);
        assert!((score.chrf - 1.0).abs() < 1e-12);
        assert_eq!(score.ter, 0.0);
    }

    // composition of the degenerate cases: zero n-gram overlap, zero char
    // overlap, and one insertion per reference word
    #[test]
    fn empty_hypotheses_compose_to_zero_zero_one() {
        let pairs = vec![pair("", &["one two three"]), pair("", &["four five six"])];
        let score = evaluate_all(&pairs, &MetricConfigs::default()).unwrap();
        assert_eq!(score.bleu, 0.0);
        assert_eq!(score.chrf, 0.0);
        assert_eq!(score.ter, 1.0);
    }

    #[test]
    fn segment_pair_needs_references() {
        assert!(matches!(
            SegmentPair::new("hyp", vec![]),
            Err(MetricsError::NoReferences)
        ));
    }

    #[test]
    fn lowercase_flag_applies_to_all_metrics() {
        let pairs = vec![pair("THE CAT SAT ON THE MAT", &["the cat sat on the mat"])];
        let cased = evaluate_all(&pairs, &MetricConfigs::default()).unwrap();
        let folded = evaluate_all(
            &pairs,
            &MetricConfigs {
                lowercase: true,
                ..MetricConfigs::default()
            },
        )
        .unwrap();
        assert_eq!(cased.bleu, 0.0);
        assert!((folded.bleu - 100.0).abs() < 1e-12);
        assert!((folded.chrf - 1.0).abs() < 1e-12);
        assert_eq!(folded.ter, 0.0);
    }

    #[test]
    fn report_serializes_with_segment_count() {
        let report = MetricReport::new(
            MetricScore {
                bleu: 20.4001,
                chrf: 0.51,
                ter: 0.6894,
            },
            20,
        );
        let json: serde_json::Value = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
        assert_eq!(json["n_segments"], 20);
        assert!((json["bleu"].as_f64().unwrap() - 20.4001).abs() < 1e-12);
        let table = report.to_table();
        assert!(table.contains("BLEU") && table.contains("20.4001"));
    }
}
