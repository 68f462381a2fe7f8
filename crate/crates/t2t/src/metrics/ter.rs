//! Translation Edit Rate with greedy block shifts.
//!
//! Edits are word insertions, deletions, substitutions, and block shifts,
//! each costing 1. The shift search repeatedly applies the single shift that
//! most reduces the word-level edit distance, subject to the configured
//! block-size and move-distance limits and to the block appearing
//! contiguously in the reference.

use super::tokenize::tokenize;
use super::{MetricsError, SegmentPair, TerConfig};

/// Word-level Levenshtein distance, two-row DP.
fn edit_distance(a: &[String], b: &[String]) -> usize {
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut curr = vec![0usize; b.len() + 1];
    for (i, ta) in a.iter().enumerate() {
        curr[0] = i + 1;
        for (j, tb) in b.iter().enumerate() {
            let cost = usize::from(ta != tb);
            curr[j + 1] = (prev[j + 1] + 1).min(curr[j] + 1).min(prev[j] + cost);
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[b.len()]
}

fn appears_contiguously(reference: &[String], block: &[String]) -> bool {
    reference.len() >= block.len() && reference.windows(block.len()).any(|w| w == block)
}

fn apply_shift(tokens: &[String], start: usize, len: usize, dest: usize) -> Vec<String> {
    let mut rest: Vec<String> = Vec::with_capacity(tokens.len());
    rest.extend_from_slice(&tokens[..start]);
    rest.extend_from_slice(&tokens[start + len..]);
    let mut out = Vec::with_capacity(tokens.len());
    out.extend_from_slice(&rest[..dest]);
    out.extend_from_slice(&tokens[start..start + len]);
    out.extend_from_slice(&rest[dest..]);
    out
}

/// Greedy edit count for one hypothesis against one reference.
fn segment_edits(hyp: &[String], reference: &[String], cfg: &TerConfig) -> usize {
    let mut current = hyp.to_vec();
    let mut shifts = 0usize;
    loop {
        let base = edit_distance(&current, reference);
        if base == 0 {
            break;
        }
        // best shift = largest distance reduction, first found wins ties
        // (scan order: start, then block length, then destination)
        let mut best: Option<(usize, Vec<String>)> = None;
        for start in 0..current.len() {
            let max_len = cfg.max_shift_size.min(current.len() - start);
            for len in 1..=max_len {
                let block = &current[start..start + len];
                if !appears_contiguously(reference, block) {
                    continue;
                }
                for dest in 0..=current.len() - len {
                    if dest == start || dest.abs_diff(start) > cfg.max_shift_distance {
                        continue;
                    }
                    let candidate = apply_shift(&current, start, len, dest);
                    let dist = edit_distance(&candidate, reference);
                    if dist < base && best.as_ref().map_or(true, |(d, _)| dist < *d) {
                        best = Some((dist, candidate));
                    }
                }
            }
        }
        match best {
            Some((_, next)) => {
                current = next;
                shifts += 1;
            }
            None => break,
        }
    }
    shifts + edit_distance(&current, reference)
}

fn fold_case(tokens: Vec<String>) -> Vec<String> {
    tokens.into_iter().map(|t| t.to_lowercase()).collect()
}

/// Corpus TER: total best edits over total words of the corresponding
/// best references (the reference minimizing edits per segment, ties to
/// the first listed).
pub fn ter(pairs: &[SegmentPair], cfg: &TerConfig) -> Result<f64, MetricsError> {
    if pairs.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    let mut total_edits = 0usize;
    let mut total_ref_words = 0usize;
    for pair in pairs {
        let mut hyp = tokenize(&pair.hypothesis);
        if !cfg.case_sensitive {
            hyp = fold_case(hyp);
        }
        let mut best: Option<(usize, usize)> = None;
        for reference in &pair.references {
            let mut ref_tokens = tokenize(reference);
            if !cfg.case_sensitive {
                ref_tokens = fold_case(ref_tokens);
            }
            if ref_tokens.is_empty() {
                return Err(MetricsError::EmptyReference);
            }
            let edits = segment_edits(&hyp, &ref_tokens, cfg);
            if best.map_or(true, |(e, _)| edits < e) {
                best = Some((edits, ref_tokens.len()));
            }
        }
        let (edits, ref_len) = best.expect("references nonempty");
        total_edits += edits;
        total_ref_words += ref_len;
    }
    Ok(total_edits as f64 / total_ref_words as f64)
}
