use std::collections::HashSet;
use std::path::Path;

use aho_corasick::AhoCorasick;

use crate::datafile::{self, parse_entries};
use crate::error::{Error, Result};

/// Character- and phrase-level Traditional/Simplified discrimination data.
#[derive(Debug, Clone)]
pub struct ScriptProfile {
    simplified_exclusive: HashSet<char>,
    traditional_exclusive: HashSet<char>,
    blocked_phrases: Vec<String>,
    matcher: Option<AhoCorasick>,
}

impl ScriptProfile {
    /// Fails if the two character sets intersect or a phrase is empty.
    pub fn new(
        simplified_exclusive: HashSet<char>,
        traditional_exclusive: HashSet<char>,
        blocked_phrases: Vec<String>,
    ) -> std::result::Result<Self, String> {
        if let Some(c) = simplified_exclusive.intersection(&traditional_exclusive).next() {
            return Err(format!("{c:?} is listed as both Simplified- and Traditional-only"));
        }
        if blocked_phrases.iter().any(String::is_empty) {
            return Err("empty blocked phrase".into());
        }
        let matcher = if blocked_phrases.is_empty() {
            None
        } else {
            Some(AhoCorasick::new(&blocked_phrases).map_err(|e| e.to_string())?)
        };
        Ok(ScriptProfile {
            simplified_exclusive,
            traditional_exclusive,
            blocked_phrases,
            matcher,
        })
    }

    /// Builds a profile from the three data-file bodies.
    pub fn parse(simplified: &str, traditional: &str, phrases: &str) -> std::result::Result<Self, String> {
        ScriptProfile::new(
            parse_char_set(simplified)?,
            parse_char_set(traditional)?,
            parse_entries(phrases),
        )
    }

    pub fn load(simplified: &Path, traditional: &Path, phrases: &Path) -> Result<Self> {
        let read = |p: &Path| std::fs::read_to_string(p);
        ScriptProfile::parse(&read(simplified)?, &read(traditional)?, &read(phrases)?).map_err(|message| {
            Error::InvalidDataFile {
                path: simplified.parent().unwrap_or(simplified).to_path_buf(),
                message,
            }
        })
    }

    pub fn blocked_phrases(&self) -> &[String] {
        &self.blocked_phrases
    }

    pub fn is_simplified(&self, c: char) -> bool {
        self.simplified_exclusive.contains(&c)
    }

    pub fn is_traditional(&self, c: char) -> bool {
        self.traditional_exclusive.contains(&c)
    }

    pub(crate) fn phrase_matcher(&self) -> Option<&AhoCorasick> {
        self.matcher.as_ref()
    }
}

impl Default for ScriptProfile {
    /// The bundled lists.
    fn default() -> Self {
        ScriptProfile::parse(
            datafile::SIMPLIFIED_CHARS,
            datafile::TRADITIONAL_CHARS,
            datafile::BLOCKED_PHRASES,
        )
        .expect("bundled script profile is valid")
    }
}

fn parse_char_set(text: &str) -> std::result::Result<HashSet<char>, String> {
    parse_entries(text)
        .into_iter()
        .map(|entry| {
            let mut chars = entry.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => Ok(c),
                _ => Err(format!("expected a single character, got {entry:?}")),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_profile_is_disjoint_and_nonempty() {
        let p = ScriptProfile::default();
        assert!(p.simplified_exclusive.len() > 200);
        assert!(p.traditional_exclusive.len() > 200);
        assert!(p.is_simplified('门') && p.is_traditional('門'));
        assert!(!p.is_simplified('台') && !p.is_simplified('后'));
        assert!(p.blocked_phrases().iter().any(|s| s == "软件"));
    }

    #[test]
    fn overlapping_sets_rejected() {
        let err = ScriptProfile::parse("门\n", "门\n", "").unwrap_err();
        assert!(err.contains("both"));
    }

    #[test]
    fn multi_char_entry_rejected() {
        assert!(ScriptProfile::parse("门们\n", "", "").is_err());
    }
}
