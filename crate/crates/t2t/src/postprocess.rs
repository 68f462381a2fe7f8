//! Cleanup of raw model completions before evaluation or translation.
//!
//! Three steps, applied in a fixed order: decode HTML character entities,
//! replace underscores with spaces, strip a quote pair wrapping the entire
//! text. The whole pass is idempotent; a second application is a no-op.

use serde::{Deserialize, Serialize};

/// Entity table, longest-first so `&quot;` wins over bare `&quot`. The bare
/// (semicolon-less) variants exist only for `&quot` and `&amp`.
const ENTITIES: &[(&str, &str)] = &[
    ("&quot;", "\""),
    ("&apos;", "'"),
    ("&amp;", "&"),
    ("&#39;", "'"),
    ("&quot", "\""),
    ("&lt;", "<"),
    ("&gt;", ">"),
    ("&amp", "&"),
];

/// Matching wrap pairs for [`strip_wrapping_quotes`].
const QUOTE_PAIRS: &[(char, char)] = &[('"', '"'), ('\'', '\''), ('“', '”'), ('‘', '’')];

/// A postprocessed completion plus the names of the steps that changed it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleanText {
    pub text: String,
    pub applied_steps: Vec<String>,
}

/// Replaces the supported HTML character entities with their ASCII
/// characters, repeatedly until a fixpoint (so `&amp;quot;` fully decodes).
pub fn decode_html_entities(text: &str) -> String {
    let mut current = text.to_string();
    loop {
        let next = decode_pass(&current);
        if next == current {
            return current;
        }
        current = next;
    }
}

fn decode_pass(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    'outer: while !rest.is_empty() {
        if rest.starts_with('&') {
            for (entity, replacement) in ENTITIES {
                if let Some(tail) = rest.strip_prefix(entity) {
                    out.push_str(replacement);
                    rest = tail;
                    continue 'outer;
                }
            }
        }
        let ch = rest.chars().next().unwrap();
        out.push(ch);
        rest = &rest[ch.len_utf8()..];
    }
    out
}

/// Replaces every underscore with a space. A run of spaces and underscores
/// that contains at least one underscore collapses to a single space;
/// pre-existing all-space runs are left alone.
pub fn replace_underscores(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    let mut run = String::new();
    let mut run_has_underscore = false;
    for ch in text.chars() {
        if ch == '_' || ch == ' ' {
            run.push(ch);
            run_has_underscore |= ch == '_';
        } else {
            flush_run(&mut out, &mut run, &mut run_has_underscore);
            out.push(ch);
        }
    }
    flush_run(&mut out, &mut run, &mut run_has_underscore);
    out
}

fn flush_run(out: &mut String, run: &mut String, has_underscore: &mut bool) {
    if *has_underscore {
        out.push(' ');
    } else {
        out.push_str(run);
    }
    run.clear();
    *has_underscore = false;
}

/// Removes a leading-and-trailing quote pair when it wraps the entire
/// (trimmed) text. Runs once, not to a fixpoint, so nested quotations
/// survive. Interior quotes are never touched.
pub fn strip_wrapping_quotes(text: &str) -> String {
    let trimmed = text.trim();
    let mut chars = trimmed.chars();
    let (first, last) = match (chars.next(), chars.next_back()) {
        (Some(f), Some(l)) => (f, l),
        // zero or one char cannot be a wrapping pair
        _ => return text.to_string(),
    };
    if QUOTE_PAIRS.iter().any(|&(open, close)| first == open && last == close) {
        trimmed[first.len_utf8()..trimmed.len() - last.len_utf8()].to_string()
    } else {
        text.to_string()
    }
}

/// Full cleanup pass: decode entities, replace underscores, strip a
/// wrapping quote pair, in that order. Steps that changed the text are
/// recorded by name.
pub fn postprocess(text: &str) -> CleanText {
    let mut applied_steps = Vec::new();
    let mut current = text.to_string();
    let steps: [(&str, fn(&str) -> String); 3] = [
        ("decode_html_entities", decode_html_entities),
        ("replace_underscores", replace_underscores),
        ("strip_wrapping_quotes", strip_wrapping_quotes),
    ];
    for (name, step) in steps {
        let next = step(&current);
        if next != current {
            applied_steps.push(name.to_string());
            current = next;
        }
    }
    CleanText {
        text: current,
        applied_steps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decodes_quot_entities() {
        assert_eq!(decode_html_entities("He said &quot;hi&quot;."), "He said \"hi\".");
    }

    #[test]
    fn decodes_bare_and_full_table() {
        assert_eq!(decode_html_entities("a &quot b"), "a \" b");
        assert_eq!(decode_html_entities("x &amp y &amp; z"), "x & y & z");
        assert_eq!(decode_html_entities("&lt;b&gt;&apos;&#39;"), "<b>''");
    }

    #[test]
    fn decode_runs_to_fixpoint() {
        assert_eq!(decode_html_entities("&amp;quot;x&amp;quot;"), "\"x\"");
    }

    #[test]
    fn decode_leaves_entity_free_text_alone() {
        let text = "no entities here & none there";
        assert_eq!(decode_html_entities(text), text);
    }

    #[test]
    fn underscores_become_single_spaces() {
        assert_eq!(replace_underscores("Bella_Center"), "Bella Center");
        assert_eq!(replace_underscores("a__b"), "a b");
        assert_eq!(replace_underscores("a _ b"), "a b");
    }

    #[test]
    fn underscore_free_text_is_untouched_even_with_double_spaces() {
        let text = "two  spaces stay";
        assert_eq!(replace_underscores(text), text);
    }

    #[test]
    fn strips_a_full_wrap_only() {
        assert_eq!(
            strip_wrapping_quotes("\"The hotel has 23 floors.\""),
            "The hotel has 23 floors."
        );
        assert_eq!(strip_wrapping_quotes("He said \"hi\" loudly."), "He said \"hi\" loudly.");
        assert_eq!(strip_wrapping_quotes("\"\""), "");
        assert_eq!(strip_wrapping_quotes("“curly”"), "curly");
        assert_eq!(strip_wrapping_quotes("‘curly’"), "curly");
        // mismatched kinds do not pair
        assert_eq!(strip_wrapping_quotes("\"mixed'"), "\"mixed'");
    }

    #[test]
    fn single_quote_char_is_not_a_wrap() {
        assert_eq!(strip_wrapping_quotes("\""), "\"");
        assert_eq!(strip_wrapping_quotes(""), "");
    }

    #[test]
    fn full_pass_traces_the_spec_example() {
        // decode first: `"&quot;Bella_Center&quot; is big."` ->
        // `""Bella_Center" is big."`; underscores -> `""Bella Center" is big."`;
        // the outer pair wraps everything and is removed once.
        let input = "\"&quot;Bella_Center&quot; is big.\"";
        let clean = postprocess(input);
        assert_eq!(clean.text, "\"Bella Center\" is big.");
        assert_eq!(
            clean.applied_steps,
            vec!["decode_html_entities", "replace_underscores", "strip_wrapping_quotes"]
        );
    }

    #[test]
    fn clean_text_records_no_steps() {
        let clean = postprocess("Already clean text.");
        assert_eq!(clean.text, "Already clean text.");
        assert!(clean.applied_steps.is_empty());
    }

    #[test]
    fn full_pass_is_idempotent_on_the_trace_example() {
        let once = postprocess("\"&quot;Bella_Center&quot; is big.\"");
        let twice = postprocess(&once.text);
        assert_eq!(twice.text, once.text);
        assert!(twice.applied_steps.is_empty());
    }
}
