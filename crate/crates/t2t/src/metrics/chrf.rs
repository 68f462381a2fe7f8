//! ChrF++: character n-gram F-score augmented with word n-grams.

use super::tokenize::tokenize;
use super::{ChrfConfig, MetricsError, SegmentPair};
use std::collections::HashMap;

/// (clipped matches, hypothesis total, reference total) for one order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct OrderCounts {
    matched: u64,
    hyp_total: u64,
    ref_total: u64,
}

fn ngram_counts<T: Eq + std::hash::Hash>(units: &[T], n: usize) -> HashMap<&[T], u64> {
    let mut counts = HashMap::new();
    if units.len() >= n {
        for window in units.windows(n) {
            *counts.entry(window).or_insert(0) += 1;
        }
    }
    counts
}

fn order_counts<T: Eq + std::hash::Hash>(hyp: &[T], reference: &[T], n: usize) -> OrderCounts {
    let hyp_counts = ngram_counts(hyp, n);
    let ref_counts = ngram_counts(reference, n);
    let mut counts = OrderCounts {
        hyp_total: hyp_counts.values().sum(),
        ref_total: ref_counts.values().sum(),
        matched: 0,
    };
    for (gram, &count) in &hyp_counts {
        counts.matched += count.min(ref_counts.get(gram).copied().unwrap_or(0));
    }
    counts
}

fn f_beta(counts: OrderCounts, beta: f64) -> f64 {
    let precision = if counts.hyp_total > 0 {
        counts.matched as f64 / counts.hyp_total as f64
    } else {
        0.0
    };
    let recall = if counts.ref_total > 0 {
        counts.matched as f64 / counts.ref_total as f64
    } else {
        0.0
    };
    if precision == 0.0 && recall == 0.0 {
        return 0.0;
    }
    let beta2 = beta * beta;
    (1.0 + beta2) * precision * recall / (beta2 * precision + recall)
}

/// All per-order counts for a hypothesis against one reference: char orders
/// first, then word orders.
fn stats_against(hyp: &str, reference: &str, cfg: &ChrfConfig) -> Vec<OrderCounts> {
    // char n-grams on text with all whitespace removed
    let hyp_chars: Vec<char> = hyp.chars().filter(|c| !c.is_whitespace()).collect();
    let ref_chars: Vec<char> = reference.chars().filter(|c| !c.is_whitespace()).collect();
    let hyp_words = tokenize(hyp);
    let ref_words = tokenize(reference);
    let mut stats = Vec::with_capacity(cfg.char_order + cfg.word_order);
    for n in 1..=cfg.char_order {
        stats.push(order_counts(&hyp_chars, &ref_chars, n));
    }
    for n in 1..=cfg.word_order {
        stats.push(order_counts(&hyp_words, &ref_words, n));
    }
    stats
}

fn mean_f(stats: &[OrderCounts], beta: f64) -> f64 {
    stats.iter().map(|&c| f_beta(c, beta)).sum::<f64>() / stats.len() as f64
}

/// Corpus ChrF++ on the 0-1 scale. Per segment, the best-matching reference
/// (highest segment-level mean F, ties to the first listed) donates its
/// match/total counts; corpus F per order comes from the summed counts.
pub fn chrf(pairs: &[SegmentPair], cfg: &ChrfConfig) -> Result<f64, MetricsError> {
    if pairs.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    let orders = cfg.char_order + cfg.word_order;
    let mut corpus = vec![OrderCounts::default(); orders];
    for pair in pairs {
        let mut best: Option<(f64, Vec<OrderCounts>)> = None;
        for reference in &pair.references {
            let stats = stats_against(&pair.hypothesis, reference, cfg);
            let score = mean_f(&stats, cfg.beta);
            if best.as_ref().map_or(true, |(s, _)| score > *s) {
                best = Some((score, stats));
            }
        }
        let (_, stats) = best.expect("references nonempty");
        for (acc, s) in corpus.iter_mut().zip(stats) {
            acc.matched += s.matched;
            acc.hyp_total += s.hyp_total;
            acc.ref_total += s.ref_total;
        }
    }
    Ok(mean_f(&corpus, cfg.beta))
}
