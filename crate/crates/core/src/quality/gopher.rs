use super::config::QualityConfig;
use super::words::{content_lines, word_count};
use crate::corpus_io::Document;
use crate::verdict::{FilterVerdict, Reason};

/// Occurrences of configured symbols per word.
pub fn symbol_word_ratio(text: &str, words: usize, cfg: &QualityConfig) -> f64 {
    let symbols: usize = cfg.symbols.iter().map(|s| text.matches(s.as_str()).count()).sum();
    symbols as f64 / words.max(1) as f64
}

/// Share of non-blank lines whose trailing text is an ellipsis form.
pub fn ellipsis_line_ratio(text: &str, cfg: &QualityConfig) -> f64 {
    let (mut lines, mut ellipsis) = (0usize, 0usize);
    for line in content_lines(text) {
        lines += 1;
        if cfg.ellipsis_forms.iter().any(|e| line.ends_with(e.as_str())) {
            ellipsis += 1;
        }
    }
    ellipsis as f64 / lines.max(1) as f64
}

/// Length bounds, then symbol ratio, ellipsis lines, and stop-word presence.
pub fn gopher_filter(doc: &Document, cfg: &QualityConfig) -> FilterVerdict {
    let text = doc.text();
    let words = word_count(text);
    if words < cfg.min_words {
        return FilterVerdict::remove_with(Reason::TooShort, words as f64);
    }
    if words > cfg.max_words {
        return FilterVerdict::remove_with(Reason::TooLong, words as f64);
    }
    let symbols = symbol_word_ratio(text, words, cfg);
    if symbols > cfg.max_symbol_word_ratio {
        return FilterVerdict::remove_with(Reason::SymbolRatio, symbols);
    }
    let ellipsis = ellipsis_line_ratio(text, cfg);
    if ellipsis > cfg.max_ellipsis_line_ratio {
        return FilterVerdict::remove_with(Reason::EllipsisLines, ellipsis);
    }
    if !cfg.stop_words.iter().any(|w| text.contains(w.as_str())) {
        return FilterVerdict::remove(Reason::NoStopWords);
    }
    FilterVerdict::KEEP
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(text: &str) -> Document {
        Document::new("d", "", "", text)
    }

    fn cjk(n: usize) -> String {
        "的天".chars().cycle().take(n).collect()
    }

    #[test]
    fn too_short_at_49() {
        let v = gopher_filter(&doc(&cjk(49)), &QualityConfig::default());
        assert_eq!(v.reason, Reason::TooShort);
        assert_eq!(v.metric_value, Some(49.0));
        assert!(gopher_filter(&doc(&cjk(50)), &QualityConfig::default()).keep);
    }

    #[test]
    fn ellipsis_lines() {
        // 10 lines of 20 ideographs, 4 ending in "……"
        let lines: Vec<String> = (0..10)
            .map(|i| {
                if i < 4 {
                    format!("{}……", cjk(20))
                } else {
                    format!("{}。", cjk(20))
                }
            })
            .collect();
        let v = gopher_filter(&doc(&lines.join("\n")), &QualityConfig::default());
        assert_eq!(v.reason, Reason::EllipsisLines);
        assert_eq!(v.metric_value, Some(0.4));
    }

    #[test]
    fn keeps_clean_text() {
        assert!(gopher_filter(&doc(&cjk(60)), &QualityConfig::default()).keep);
    }

    #[test]
    fn symbol_ratio_counts_each_form() {
        let cfg = QualityConfig::default();
        // "……" is two "…"; "..." and "#" count once each
        assert_eq!(symbol_word_ratio("a…… b... #c", 4, &cfg), 1.0);
        let text = format!("{}######", cjk(50));
        let v = gopher_filter(&doc(&text), &cfg);
        assert_eq!(v.reason, Reason::SymbolRatio);
        assert_eq!(v.metric_value, Some(0.12));
    }

    #[test]
    fn no_stop_words() {
        let text: String = "天地玄黃宇宙洪荒".chars().cycle().take(60).collect();
        assert_eq!(
            gopher_filter(&doc(&text), &QualityConfig::default()).reason,
            Reason::NoStopWords
        );
    }
}
