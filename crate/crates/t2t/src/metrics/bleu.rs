//! Corpus-level BLEU with modified n-gram precision and brevity penalty.

use super::tokenize::tokenize;
use super::{BleuConfig, MetricsError, SegmentPair};
use std::collections::HashMap;

#[derive(Debug, Default, Clone)]
struct BleuStats {
    matched: Vec<u64>,
    total: Vec<u64>,
    hyp_len: u64,
    eff_ref_len: u64,
}

impl BleuStats {
    fn new(max_order: usize) -> Self {
        Self {
            matched: vec![0; max_order],
            total: vec![0; max_order],
            hyp_len: 0,
            eff_ref_len: 0,
        }
    }

    fn add(&mut self, other: &BleuStats) {
        for n in 0..self.matched.len() {
            self.matched[n] += other.matched[n];
            self.total[n] += other.total[n];
        }
        self.hyp_len += other.hyp_len;
        self.eff_ref_len += other.eff_ref_len;
    }
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], u64> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for window in tokens.windows(n) {
            *counts.entry(window).or_insert(0) += 1;
        }
    }
    counts
}

/// Per-segment reference length closest to the hypothesis length, ties
/// broken toward the shorter reference.
fn effective_ref_len(hyp_len: usize, ref_lens: &[usize]) -> usize {
    let mut best = ref_lens[0];
    for &len in &ref_lens[1..] {
        let (d_new, d_best) = (len.abs_diff(hyp_len), best.abs_diff(hyp_len));
        if d_new < d_best || (d_new == d_best && len < best) {
            best = len;
        }
    }
    best
}

fn segment_stats(hyp: &[String], refs: &[Vec<String>], max_order: usize) -> BleuStats {
    let mut stats = BleuStats::new(max_order);
    stats.hyp_len = hyp.len() as u64;
    let ref_lens: Vec<usize> = refs.iter().map(Vec::len).collect();
    stats.eff_ref_len = effective_ref_len(hyp.len(), &ref_lens) as u64;
    for n in 1..=max_order {
        let hyp_counts = ngram_counts(hyp, n);
        let ref_counts: Vec<_> = refs.iter().map(|r| ngram_counts(r, n)).collect();
        stats.total[n - 1] = hyp_counts.values().sum();
        for (gram, &count) in &hyp_counts {
            // clip to the maximum count over references
            let max_ref = ref_counts
                .iter()
                .map(|rc| rc.get(gram).copied().unwrap_or(0))
                .max()
                .unwrap_or(0);
            stats.matched[n - 1] += count.min(max_ref);
        }
    }
    stats
}

/// Corpus BLEU on the 0-100 scale. Zero whenever any order's precision is
/// zero (no smoothing at corpus level).
pub fn corpus_bleu(pairs: &[SegmentPair], cfg: &BleuConfig) -> Result<f64, MetricsError> {
    if pairs.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    let max_order = cfg.max_order.max(1);
    let mut corpus = BleuStats::new(max_order);
    for pair in pairs {
        let hyp = tokenize(&pair.hypothesis);
        let refs: Vec<Vec<String>> = pair.references.iter().map(|r| tokenize(r)).collect();
        corpus.add(&segment_stats(&hyp, &refs, max_order));
    }
    score(&corpus)
}

fn score(stats: &BleuStats) -> Result<f64, MetricsError> {
    if stats.hyp_len == 0 {
        return Ok(0.0);
    }
    let mut log_precision_sum = 0.0;
    for n in 0..stats.matched.len() {
        if stats.total[n] == 0 || stats.matched[n] == 0 {
            return Ok(0.0);
        }
        log_precision_sum += (stats.matched[n] as f64 / stats.total[n] as f64).ln();
    }
    let c = stats.hyp_len as f64;
    let r = stats.eff_ref_len as f64;
    let brevity_penalty = if c > r { 1.0 } else { (1.0 - r / c).exp() };
    Ok(100.0 * brevity_penalty * (log_precision_sum / stats.matched.len() as f64).exp())
}

/// Sentence-level BLEU diagnostic with add-one smoothing for orders >= 2.
/// Not comparable to corpus scores; intended for eyeballing single outputs.
pub fn sentence_bleu_smoothed(hypothesis: &str, references: &[String], cfg: &BleuConfig) -> f64 {
    let hyp = tokenize(hypothesis);
    if hyp.is_empty() {
        return 0.0;
    }
    let refs: Vec<Vec<String>> = references.iter().map(|r| tokenize(r)).collect();
    let max_order = cfg.max_order.max(1);
    let stats = segment_stats(&hyp, &refs, max_order);
    let mut log_precision_sum = 0.0;
    for n in 0..max_order {
        let (mut matched, mut total) = (stats.matched[n] as f64, stats.total[n] as f64);
        if n > 0 {
            matched += 1.0;
            total += 1.0;
        }
        if total == 0.0 || matched == 0.0 {
            return 0.0;
        }
        log_precision_sum += (matched / total).ln();
    }
    let c = stats.hyp_len as f64;
    let r = stats.eff_ref_len as f64;
    let brevity_penalty = if c > r { 1.0 } else { (1.0 - r / c).exp() };
    100.0 * brevity_penalty * (log_precision_sum / max_order as f64).exp()
}
