use std::collections::HashMap;

use super::config::{NewLineDenominator, QualityConfig};
use super::words::{content_lines, word_count};
use crate::corpus_io::Document;
use crate::verdict::{FilterVerdict, Reason};

/// Share of non-blank lines ending in terminal punctuation.
pub fn line_punct_ratio(text: &str, cfg: &QualityConfig) -> f64 {
    let (mut lines, mut punct) = (0usize, 0usize);
    for line in content_lines(text) {
        lines += 1;
        if line
            .chars()
            .next_back()
            .is_some_and(|c| cfg.terminal_punctuation.contains(&c))
        {
            punct += 1;
        }
    }
    punct as f64 / lines.max(1) as f64
}

/// Share of non-blank lines with fewer than `short_line_char_threshold`
/// codepoints.
pub fn short_line_ratio(text: &str, cfg: &QualityConfig) -> f64 {
    let (mut lines, mut short) = (0usize, 0usize);
    for line in content_lines(text) {
        lines += 1;
        if line.chars().count() < cfg.short_line_char_threshold {
            short += 1;
        }
    }
    short as f64 / lines.max(1) as f64
}

/// Codepoints in lines that occur more than once, over all line codepoints.
pub fn char_dup_ratio(text: &str) -> f64 {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for line in content_lines(text) {
        *counts.entry(line).or_default() += 1;
    }
    let (mut total, mut dup) = (0usize, 0usize);
    for (line, n) in counts {
        let mass = line.chars().count() * n;
        total += mass;
        if n > 1 {
            dup += mass;
        }
    }
    dup as f64 / total.max(1) as f64
}

pub fn new_line_ratio(text: &str, cfg: &QualityConfig) -> f64 {
    let newlines = text.matches('\n').count();
    let denom = match cfg.new_line_denominator {
        NewLineDenominator::Words => word_count(text),
        NewLineDenominator::Codepoints => text.chars().count(),
    };
    newlines as f64 / denom.max(1) as f64
}

/// Punctuated lines, short lines, duplicated-line mass, newline density.
pub fn fineweb_filter(doc: &Document, cfg: &QualityConfig) -> FilterVerdict {
    let text = doc.text();
    let punct = line_punct_ratio(text, cfg);
    if punct < cfg.min_line_punct_ratio {
        return FilterVerdict::remove_with(Reason::LinePunctRatio, punct);
    }
    let short = short_line_ratio(text, cfg);
    if short > cfg.max_short_line_ratio {
        return FilterVerdict::remove_with(Reason::ShortLineRatio, short);
    }
    let dup = char_dup_ratio(text);
    if dup > cfg.max_char_dup_ratio {
        return FilterVerdict::remove_with(Reason::CharDupRatio, dup);
    }
    let newlines = new_line_ratio(text, cfg);
    if newlines > cfg.max_new_line_ratio {
        return FilterVerdict::remove_with(Reason::NewLineRatio, newlines);
    }
    FilterVerdict::KEEP
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(text: &str) -> Document {
        Document::new("d", "", "", text)
    }

    fn cjk(n: usize, seed: usize) -> String {
        let pool: Vec<char> = "春夏秋冬東南西北上下左右天地人和".chars().collect();
        (0..n).map(|i| pool[(i * 7 + seed * 3) % pool.len()]).collect()
    }

    #[test]
    fn low_punctuation() {
        let lines: Vec<String> = (0..100)
            .map(|i| {
                if i < 3 {
                    format!("{}。", cjk(30, i))
                } else {
                    cjk(30, i)
                }
            })
            .collect();
        let v = fineweb_filter(&doc(&lines.join("\n")), &QualityConfig::default());
        assert_eq!(v.reason, Reason::LinePunctRatio);
        assert_eq!(v.metric_value, Some(0.03));
    }

    #[test]
    fn short_lines() {
        let mut lines: Vec<String> = (0..9).map(|i| format!("{}。", cjk(4, i))).collect();
        lines.push(format!("{}。", cjk(40, 99)));
        let v = fineweb_filter(&doc(&lines.join("\n")), &QualityConfig::default());
        assert_eq!(v.reason, Reason::ShortLineRatio);
        assert_eq!(v.metric_value, Some(0.9));
    }

    #[test]
    fn duplicated_line_mass() {
        // one 40-codepoint line three times plus 80 codepoints of unique lines
        let rep = format!("{}。", cjk(39, 1));
        let text = [
            rep.as_str(),
            &format!("{}。", cjk(39, 2)),
            rep.as_str(),
            &format!("{}。", cjk(39, 3)),
            rep.as_str(),
        ]
        .join("\n");
        assert_eq!(char_dup_ratio(&text), 120.0 / 200.0);
        let v = fineweb_filter(&doc(&text), &QualityConfig::default());
        assert_eq!(v.reason, Reason::CharDupRatio);
        assert_eq!(v.metric_value, Some(0.6));
    }

    #[test]
    fn newline_ratio_denominators() {
        let text = "甲乙丙。\n丁戊己。";
        let mut cfg = QualityConfig::default();
        assert_eq!(new_line_ratio(text, &cfg), 1.0 / 6.0);
        cfg.new_line_denominator = NewLineDenominator::Codepoints;
        assert_eq!(new_line_ratio(text, &cfg), 1.0 / 9.0);
    }

    #[test]
    fn empty_text_fails_punctuation() {
        let v = fineweb_filter(&doc(""), &QualityConfig::default());
        assert_eq!(v.reason, Reason::LinePunctRatio);
    }
}
