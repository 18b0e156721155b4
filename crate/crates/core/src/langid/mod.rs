//! Traditional Chinese identification: a pluggable statistical scorer
//! followed by character- and phrase-level Simplified Chinese rejection.

mod profile;
mod scorer;

pub use profile::ScriptProfile;
pub use scorer::{FixedScorer, LanguageScore, LanguageScorer, NgramModelScorer, ScorerFactory, ScriptScorer};

use crate::corpus_io::Document;
use crate::verdict::{FilterVerdict, Reason};

#[derive(Debug, Clone, PartialEq)]
pub struct LangIdConfig {
    /// Label the scorer must return.
    pub language: String,
    /// Minimum scorer confidence.
    pub threshold: f64,
    /// Largest tolerated Simplified share among discriminating characters.
    pub max_simplified_fraction: f64,
}

impl Default for LangIdConfig {
    fn default() -> Self {
        LangIdConfig {
            language: "zh".into(),
            threshold: 0.65,
            max_simplified_fraction: 0.0,
        }
    }
}

/// Runs the scorer; empty text always scores zero confidence.
pub fn score_language(text: &str, scorer: &mut dyn LanguageScorer) -> LanguageScore {
    if text.trim().is_empty() {
        return LanguageScore::new("und", 0.0);
    }
    scorer.score(text)
}

/// Single pass over `text` with the profile's phrase automaton.
pub fn contains_blocked_phrase(text: &str, profile: &ScriptProfile) -> bool {
    profile.phrase_matcher().is_some_and(|m| m.is_match(text))
}

/// Share of Simplified-only characters among all script-discriminating
/// characters; 0 when there are none.
pub fn simplified_char_fraction(text: &str, profile: &ScriptProfile) -> f64 {
    let (mut simplified, mut traditional) = (0usize, 0usize);
    for c in text.chars() {
        if profile.is_simplified(c) {
            simplified += 1;
        } else if profile.is_traditional(c) {
            traditional += 1;
        }
    }
    simplified as f64 / (simplified + traditional).max(1) as f64
}

/// Language gate, then Simplified-script gate, then phrase gate. The
/// language label and score are always recorded in `doc.meta`.
pub fn identify(
    doc: &mut Document,
    scorer: &mut dyn LanguageScorer,
    profile: &ScriptProfile,
    config: &LangIdConfig,
) -> FilterVerdict {
    let score = score_language(doc.text(), scorer);
    doc.annotate("lang", score.language.clone());
    doc.annotate("lang_score", format!("{:.4}", score.confidence));

    let verdict = if score.language != config.language || score.confidence < config.threshold {
        FilterVerdict::remove_with(Reason::LowLangConfidence, score.confidence)
    } else {
        let fraction = simplified_char_fraction(doc.text(), profile);
        if fraction > config.max_simplified_fraction {
            FilterVerdict::remove_with(Reason::SimplifiedScript, fraction)
        } else if contains_blocked_phrase(doc.text(), profile) {
            FilterVerdict::remove(Reason::BlockedPhrase)
        } else {
            FilterVerdict::KEEP
        }
    };
    if !verdict.keep {
        doc.annotate("removal_reason", verdict.reason.as_str());
    }
    verdict
}
