use std::path::Path;

use crate::corpus_io::Document;
use crate::error::{Error, Result};

use super::ScoreCard;

/// Marker replaced by the document text.
pub const TEXT_PLACEHOLDER: &str = "< 待評估的文本 >";
/// Marker for a criterion score in the format block.
pub const SCORE_PLACEHOLDER: &str = "< 分數 >";
/// Marker for the total in the format block.
pub const TOTAL_PLACEHOLDER: &str = "< 總分 >";

const BUNDLED: &str = include_str!("../../data/rubric_zh.v1.txt");

/// A judge prompt template loaded from a UTF-8 file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RubricTemplate {
    text: String,
}

impl Default for RubricTemplate {
    fn default() -> Self {
        RubricTemplate::parse(BUNDLED).expect("bundled rubric is valid")
    }
}

impl RubricTemplate {
    /// The template must contain the text placeholder exactly once and at
    /// least three score lines plus a total line.
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let n = text.matches(TEXT_PLACEHOLDER).count();
        if n != 1 {
            return Err(format!("expected one `{TEXT_PLACEHOLDER}` placeholder, found {n}"));
        }
        let t = RubricTemplate { text: text.to_string() };
        let lines = t.format_lines();
        let scores = lines.iter().filter(|l| l.contains(SCORE_PLACEHOLDER)).count();
        if scores < 3 || !lines.iter().any(|l| l.contains(TOTAL_PLACEHOLDER)) {
            return Err("format block needs three score lines and a total line".into());
        }
        Ok(t)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text).map_err(|message| Error::InvalidDataFile {
            path: path.to_path_buf(),
            message,
        })
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    /// Lines of the scoring-format block, in template order.
    pub fn format_lines(&self) -> Vec<&str> {
        self.text
            .lines()
            .filter(|l| l.contains(SCORE_PLACEHOLDER) || l.contains(TOTAL_PLACEHOLDER))
            .collect()
    }

    pub fn render(&self, text: &str) -> String {
        self.text.replacen(TEXT_PLACEHOLDER, text, 1)
    }

    /// Fills the format block with `card`'s values, producing a response
    /// a well-behaved judge would return.
    pub fn render_response(&self, card: &ScoreCard) -> String {
        let mut values = [card.naturalness, card.educational, card.sensitivity].into_iter();
        let mut out = Vec::new();
        for line in self.format_lines() {
            if line.contains(SCORE_PLACEHOLDER) {
                let v = values.next().map(|v| v.to_string()).unwrap_or_default();
                out.push(line.replace(SCORE_PLACEHOLDER, &v));
            } else {
                out.push(line.replace(TOTAL_PLACEHOLDER, &card.total.to_string()));
            }
        }
        out.join("\n")
    }
}

/// Renders the judge prompt for `doc` with the bundled rubric.
pub fn render_rubric_prompt(doc: &Document) -> String {
    RubricTemplate::default().render(doc.text())
}
