//! Evaluation tokenizer shared by BLEU, ChrF++ word n-grams, and TER.

/// Splits on Unicode whitespace, then gives every non-alphanumeric character
/// its own token. No characters other than whitespace are dropped.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut word = String::new();
    for chunk in text.split_whitespace() {
        for ch in chunk.chars() {
            if ch.is_alphanumeric() {
                word.push(ch);
            } else {
                if !word.is_empty() {
                    tokens.push(std::mem::take(&mut word));
                }
                tokens.push(ch.to_string());
            }
        }
        if !word.is_empty() {
            tokens.push(std::mem::take(&mut word));
        }
    }
    tokens
}
