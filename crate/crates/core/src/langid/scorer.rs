use std::collections::HashMap;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Top label and its confidence, clamped to `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LanguageScore {
    pub language: String,
    pub confidence: f64,
}

impl LanguageScore {
    pub fn new(language: impl Into<String>, confidence: f64) -> Self {
        let confidence = if confidence.is_nan() {
            0.0
        } else {
            confidence.clamp(0.0, 1.0)
        };
        LanguageScore {
            language: language.into(),
            confidence,
        }
    }
}

/// A statistical language identifier. Implementations may keep internal
/// state, so the pipeline gives each worker its own instance.
pub trait LanguageScorer: Send {
    fn score(&mut self, text: &str) -> LanguageScore;
}

/// Produces one scorer per worker.
pub trait ScorerFactory: Send + Sync {
    fn make(&self) -> Box<dyn LanguageScorer>;
}

impl<F> ScorerFactory for F
where
    F: Fn() -> Box<dyn LanguageScorer> + Send + Sync,
{
    fn make(&self) -> Box<dyn LanguageScorer> {
        self()
    }
}

/// Always returns the same label; for tests and dry runs.
#[derive(Debug, Clone)]
pub struct FixedScorer(pub LanguageScore);

impl LanguageScorer for FixedScorer {
    fn score(&mut self, _text: &str) -> LanguageScore {
        self.0.clone()
    }
}

/// Model-free baseline that labels text by its dominant script.
///
/// Han-dominant text is `zh` with confidence equal to the Han share of
/// letters; a kana share of at least 15% makes it `ja`; Hangul-dominant text
/// is `ko`; anything else alphabetic is `en`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ScriptScorer;

const KANA_SHARE_FOR_JA: f64 = 0.15;

impl LanguageScorer for ScriptScorer {
    fn score(&mut self, text: &str) -> LanguageScore {
        let (mut han, mut kana, mut hangul, mut other) = (0usize, 0usize, 0usize, 0usize);
        for c in text.chars() {
            match c as u32 {
                0x3400..=0x4DBF | 0x4E00..=0x9FFF | 0xF900..=0xFAFF => han += 1,
                0x3040..=0x30FF => kana += 1,
                0xAC00..=0xD7AF | 0x1100..=0x11FF => hangul += 1,
                _ if c.is_alphabetic() => other += 1,
                _ => {}
            }
        }
        let total = han + kana + hangul + other;
        if total == 0 {
            return LanguageScore::new("und", 0.0);
        }
        let share = |n: usize| n as f64 / total as f64;
        if share(kana) >= KANA_SHARE_FOR_JA {
            LanguageScore::new("ja", share(kana + han))
        } else if hangul > han && hangul >= other {
            LanguageScore::new("ko", share(hangul))
        } else if han >= other {
            LanguageScore::new("zh", share(han))
        } else {
            LanguageScore::new("en", share(other))
        }
    }
}

/// Character n-gram naive Bayes classifier loaded from a TSV model file.
///
/// Each non-comment line is `label<TAB>ngram<TAB>log_prob`. The n-gram
/// `<unk>` gives a label's log-probability for unseen n-grams and `<prior>`
/// its log prior. Unigrams and bigrams of the input are scored; the
/// confidence is the softmax posterior of the winning label. Clones share
/// the loaded model.
#[derive(Debug, Clone)]
pub struct NgramModelScorer {
    labels: Arc<[LabelModel]>,
    max_chars: usize,
}

#[derive(Debug, Clone)]
struct LabelModel {
    label: String,
    prior: f64,
    unk: f64,
    grams: HashMap<String, f64>,
}

impl NgramModelScorer {
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::ScorerUnavailable(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| Error::ScorerUnavailable(format!("{}: {e}", path.display())))
    }

    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut labels: Vec<LabelModel> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split('\t');
            let (Some(label), Some(gram), Some(logp), None) = (parts.next(), parts.next(), parts.next(), parts.next())
            else {
                return Err(format!("line {}: expected 3 tab-separated fields", i + 1));
            };
            let logp: f64 = logp
                .trim()
                .parse()
                .map_err(|_| format!("line {}: bad log-probability", i + 1))?;
            if logp > 0.0 || logp.is_nan() {
                return Err(format!("line {}: log-probability must be <= 0", i + 1));
            }
            let idx = match labels.iter().position(|m| m.label == label) {
                Some(idx) => idx,
                None => {
                    labels.push(LabelModel {
                        label: label.to_string(),
                        prior: 0.0,
                        unk: -20.0,
                        grams: HashMap::new(),
                    });
                    labels.len() - 1
                }
            };
            let model = &mut labels[idx];
            match gram {
                "<prior>" => model.prior = logp,
                "<unk>" => model.unk = logp,
                g => {
                    model.grams.insert(g.to_string(), logp);
                }
            }
        }
        if labels.is_empty() {
            return Err("model defines no labels".into());
        }
        Ok(NgramModelScorer {
            labels: labels.into(),
            max_chars: 4000,
        })
    }
}

impl LanguageScorer for NgramModelScorer {
    fn score(&mut self, text: &str) -> LanguageScore {
        let chars: Vec<char> = text
            .chars()
            .filter(|c| !c.is_whitespace())
            .take(self.max_chars)
            .collect();
        if chars.is_empty() {
            return LanguageScore::new("und", 0.0);
        }
        let mut buf = String::new();
        let loglik: Vec<f64> = self
            .labels
            .iter()
            .map(|m| {
                let mut total = m.prior;
                for n in 1..=2 {
                    for w in chars.windows(n) {
                        buf.clear();
                        buf.extend(w);
                        total += m.grams.get(buf.as_str()).copied().unwrap_or(m.unk);
                    }
                }
                total
            })
            .collect();
        let (best, &max) = loglik
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("at least one label");
        let denom: f64 = loglik.iter().map(|l| (l - max).exp()).sum();
        LanguageScore::new(self.labels[best].label.clone(), 1.0 / denom)
    }
}
