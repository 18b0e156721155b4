use super::config::QualityConfig;
use crate::corpus_io::Document;
use crate::verdict::{FilterVerdict, Reason};

const BRACKETS: &[char] = &['{', '}', '[', ']', '(', ')', '（', '）', '【', '】'];

pub fn is_bracket(c: char) -> bool {
    BRACKETS.contains(&c)
}

/// Bracket characters over total codepoints.
pub fn bracket_ratio(text: &str) -> f64 {
    let (mut total, mut brackets) = (0usize, 0usize);
    for c in text.chars() {
        total += 1;
        if is_bracket(c) {
            brackets += 1;
        }
    }
    brackets as f64 / total.max(1) as f64
}

/// False when the line mentions javascript, holds a curly bracket, or
/// contains a policy phrase (both matched case-insensitively).
pub fn c4_line_filter(line: &str, cfg: &QualityConfig) -> bool {
    if line.contains(['{', '}']) {
        return false;
    }
    let lowered = line.to_lowercase();
    if lowered.contains("javascript") {
        return false;
    }
    !cfg.policy_substrings
        .iter()
        .any(|p| lowered.contains(p.to_lowercase().as_str()))
}

/// Rejects on the whole-document bracket ratio; otherwise drops failing
/// lines and returns the surviving text joined with LF.
pub fn c4_document_filter(doc: &Document, cfg: &QualityConfig) -> (FilterVerdict, String) {
    let text = doc.text();
    let ratio = bracket_ratio(text);
    if ratio > cfg.max_bracket_ratio {
        return (
            FilterVerdict::remove_with(Reason::BracketRatio, ratio),
            text.to_string(),
        );
    }
    let kept: Vec<&str> = text.split('\n').filter(|l| c4_line_filter(l, cfg)).collect();
    (FilterVerdict::KEEP, kept.join("\n"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QualityConfig {
        QualityConfig::default()
    }

    #[test]
    fn line_rules() {
        assert!(!c4_line_filter("var x = {a:1}", &cfg()));
        assert!(!c4_line_filter("Please enable JavaScript", &cfg()));
        assert!(!c4_line_filter("請閱讀我們的隱私權政策", &cfg()));
        assert!(!c4_line_filter("See our Privacy Policy.", &cfg()));
        assert!(!c4_line_filter("我們的 cookie 政策", &cfg()));
        assert!(c4_line_filter("今天天氣很好。", &cfg()));
        assert!(c4_line_filter("（括號）可以", &cfg()));
    }

    #[test]
    fn bracket_ratio_examples() {
        assert_eq!(bracket_ratio(""), 0.0);
        let s = format!("(({}", "中".repeat(98));
        assert_eq!(s.chars().count(), 100);
        assert_eq!(bracket_ratio(&s), 0.02);
        assert_eq!(bracket_ratio(&"中".repeat(50)), 0.0);
        assert_eq!(bracket_ratio("【】"), 1.0);
    }

    #[test]
    fn drops_curly_line() {
        let text = format!("{}\nfunction() {{ }}", "中".repeat(500));
        let (v, cleaned) = c4_document_filter(&Document::new("d", "", "", &text), &cfg());
        assert!(v.keep);
        assert_eq!(cleaned, "中".repeat(500));
    }

    #[test]
    fn bracket_ratio_removal_leaves_text() {
        let text = format!("(({}", "中".repeat(98));
        let (v, cleaned) = c4_document_filter(&Document::new("d", "", "", &text), &cfg());
        assert_eq!(v.reason, Reason::BracketRatio);
        assert_eq!(v.metric_value, Some(0.02));
        assert_eq!(cleaned, text);
    }

    #[test]
    fn untouched_when_clean() {
        let text = "第一行。\n第二行。\n";
        let (v, cleaned) = c4_document_filter(&Document::new("d", "", "", text), &cfg());
        assert!(v.keep);
        assert_eq!(cleaned, text);
    }

    #[test]
    fn idempotent() {
        let body = "中".repeat(200);
        let text = format!("a\nprivacy policy\nb {{\n\n{body}");
        let once = c4_document_filter(&Document::new("d", "", "", &text), &cfg()).1;
        let twice = c4_document_filter(&Document::new("d", "", "", &once), &cfg()).1;
        assert_eq!(once, format!("a\n\n{body}"));
        assert_eq!(once, twice);
    }
}
