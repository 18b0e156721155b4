//! One-entry-per-line data files (stop words, phrase lists, character sets).
//!
//! Lines are trimmed; blank lines and lines starting with `"# "` are
//! skipped. A lone `#` is an entry, so it can appear in symbol lists.

use std::path::Path;

use crate::error::Result;

pub fn parse_entries(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with("# "))
        .map(str::to_string)
        .collect()
}

pub fn load_entries(path: &Path) -> Result<Vec<String>> {
    Ok(parse_entries(&std::fs::read_to_string(path)?))
}

pub(crate) const STOP_WORDS: &str = include_str!("../data/stop_words.txt");
pub(crate) const POLICY_SUBSTRINGS: &str = include_str!("../data/policy_substrings.txt");
pub(crate) const SYMBOLS: &str = include_str!("../data/symbols.txt");
pub(crate) const SIMPLIFIED_CHARS: &str = include_str!("../data/simplified_chars.txt");
pub(crate) const TRADITIONAL_CHARS: &str = include_str!("../data/traditional_chars.txt");
pub(crate) const BLOCKED_PHRASES: &str = include_str!("../data/blocked_phrases.txt");
