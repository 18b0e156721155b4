use std::collections::HashSet;

use crate::datafile::{self, parse_entries};

/// What the newline count is divided by in the new-line ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NewLineDenominator {
    #[default]
    Words,
    Codepoints,
}

/// Thresholds and word lists for the Gopher, C4 and FineWeb heuristics.
#[derive(Debug, Clone, PartialEq)]
pub struct QualityConfig {
    pub min_words: usize,
    pub max_words: usize,
    pub max_symbol_word_ratio: f64,
    pub max_ellipsis_line_ratio: f64,
    pub stop_words: Vec<String>,
    pub symbols: Vec<String>,
    pub ellipsis_forms: Vec<String>,
    pub max_bracket_ratio: f64,
    pub policy_substrings: Vec<String>,
    pub min_line_punct_ratio: f64,
    pub short_line_char_threshold: usize,
    pub max_short_line_ratio: f64,
    pub max_char_dup_ratio: f64,
    pub max_new_line_ratio: f64,
    pub new_line_denominator: NewLineDenominator,
    pub terminal_punctuation: HashSet<char>,
}

pub const DEFAULT_TERMINAL_PUNCTUATION: &[char] =
    &['。', '！', '？', '…', '」', '』', '）', '.', '!', '?', '"', '\'', ')'];

impl Default for QualityConfig {
    fn default() -> Self {
        QualityConfig {
            min_words: 50,
            max_words: 100_000,
            max_symbol_word_ratio: 0.1,
            max_ellipsis_line_ratio: 0.3,
            stop_words: parse_entries(datafile::STOP_WORDS),
            symbols: parse_entries(datafile::SYMBOLS),
            ellipsis_forms: vec!["…".into(), "……".into(), "...".into()],
            max_bracket_ratio: 0.01,
            policy_substrings: parse_entries(datafile::POLICY_SUBSTRINGS),
            min_line_punct_ratio: 0.04,
            short_line_char_threshold: 10,
            max_short_line_ratio: 0.8,
            max_char_dup_ratio: 0.3,
            max_new_line_ratio: 0.3,
            new_line_denominator: NewLineDenominator::Words,
            terminal_punctuation: DEFAULT_TERMINAL_PUNCTUATION.iter().copied().collect(),
        }
    }
}

impl QualityConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(0 < self.min_words && self.min_words < self.max_words) {
            return Err(format!(
                "need 0 < min_words < max_words (got {} and {})",
                self.min_words, self.max_words
            ));
        }
        let ratios = [
            ("max_symbol_word_ratio", self.max_symbol_word_ratio),
            ("max_ellipsis_line_ratio", self.max_ellipsis_line_ratio),
            ("max_bracket_ratio", self.max_bracket_ratio),
            ("min_line_punct_ratio", self.min_line_punct_ratio),
            ("max_short_line_ratio", self.max_short_line_ratio),
            ("max_char_dup_ratio", self.max_char_dup_ratio),
            ("max_new_line_ratio", self.max_new_line_ratio),
        ];
        for (name, value) in ratios {
            if !(0.0..=1.0).contains(&value) {
                return Err(format!("{name} must lie in [0, 1] (got {value})"));
            }
        }
        if self.stop_words.is_empty() {
            return Err("stop_words must not be empty".into());
        }
        Ok(())
    }
}
