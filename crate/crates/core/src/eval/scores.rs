use std::io::{BufRead, Write};
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_CRITERION_SCORE: u8 = 5;

/// Rubric scores for one document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScoreCard {
    pub doc_id: String,
    pub naturalness: u8,
    pub educational: u8,
    pub sensitivity: u8,
    pub total: u8,
}

impl ScoreCard {
    /// `None` when a criterion exceeds the maximum.
    pub fn new(doc_id: impl Into<String>, naturalness: u8, educational: u8, sensitivity: u8) -> Option<Self> {
        if [naturalness, educational, sensitivity]
            .iter()
            .any(|&v| v > MAX_CRITERION_SCORE)
        {
            return None;
        }
        Some(ScoreCard {
            doc_id: doc_id.into(),
            naturalness,
            educational,
            sensitivity,
            total: naturalness + educational + sensitivity,
        })
    }
}

/// A parsed card plus the total the judge stated, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedResponse {
    pub card: ScoreCard,
    pub stated_total: Option<u32>,
}

impl ParsedResponse {
    pub fn total_disagrees(&self) -> bool {
        self.stated_total.is_some_and(|t| t != u32::from(self.card.total))
    }
}

fn normalize(response: &str) -> String {
    response
        .chars()
        .map(|c| match c {
            '０'..='９' => char::from_u32(c as u32 - '０' as u32 + '0' as u32).unwrap_or(c),
            '：' => ':',
            '．' => '.',
            '　' => ' ',
            _ => c,
        })
        .collect()
}

fn patterns() -> &'static [Regex; 4] {
    static RE: OnceLock<[Regex; 4]> = OnceLock::new();
    RE.get_or_init(|| {
        let re = |label: &str| Regex::new(&format!(r"{label}[^\n:]*:[ \t<]*(\d+)")).expect("static pattern");
        [re("繁體中文與語言自然性"), re("教育價值"), re("敏感內容"), re("總分")]
    })
}

/// Extracts the three criterion scores and the stated total. The total is
/// always recomputed from the criteria.
pub fn parse_response(response: &str, doc_id: &str) -> Result<ParsedResponse> {
    let text = normalize(response);
    let [nat, edu, sens, total] = patterns();
    let grab = |re: &Regex| -> Option<u32> { re.captures(&text).and_then(|c| c[1].parse().ok()) };
    let criterion = |re: &Regex| grab(re).filter(|&v| v <= u32::from(MAX_CRITERION_SCORE));
    let unparsable = || Error::UnparsableResponse {
        doc_id: doc_id.to_string(),
    };
    let (Some(n), Some(e), Some(s)) = (criterion(nat), criterion(edu), criterion(sens)) else {
        return Err(unparsable());
    };
    let card = ScoreCard::new(doc_id, n as u8, e as u8, s as u8).ok_or_else(unparsable)?;
    Ok(ParsedResponse {
        card,
        stated_total: grab(total),
    })
}

/// [`parse_response`] that logs a stated total disagreeing with the
/// recomputed one.
pub fn parse_scores(response: &str, doc_id: &str) -> Result<ScoreCard> {
    let parsed = parse_response(response, doc_id)?;
    if parsed.total_disagrees() {
        log::warn!(
            "{doc_id}: stated total {} differs from recomputed {}",
            parsed.stated_total.unwrap_or_default(),
            parsed.card.total
        );
    }
    Ok(parsed.card)
}

/// One line of the prompts file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptRecord {
    pub doc_id: String,
    pub prompt: String,
}

/// One line of the responses file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResponseRecord {
    pub doc_id: String,
    pub response: String,
}

pub fn write_jsonl<T: Serialize, W: Write>(records: &[T], mut sink: W) -> Result<()> {
    for r in records {
        serde_json::to_writer(&mut sink, r)?;
        sink.write_all(b"\n").map_err(Error::SinkWriteFailure)?;
    }
    sink.flush().map_err(Error::SinkWriteFailure)
}

pub fn read_jsonl<T: for<'de> Deserialize<'de>, R: BufRead>(source: R) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for (i, line) in source.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::MalformedLine {
            line: i + 1,
            message: e.to_string(),
        })?);
    }
    Ok(out)
}

/// Parsed cards of a responses file together with the exclusions.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ScoringSummary {
    pub cards: Vec<ScoreCard>,
    pub unparsable: Vec<String>,
    pub total_disagreements: usize,
}

pub fn score_responses(responses: &[ResponseRecord]) -> ScoringSummary {
    let mut summary = ScoringSummary::default();
    for r in responses {
        match parse_response(&r.response, &r.doc_id) {
            Ok(parsed) => {
                if parsed.total_disagrees() {
                    log::warn!("{}: stated total disagrees, using recomputed", r.doc_id);
                    summary.total_disagreements += 1;
                }
                summary.cards.push(parsed.card);
            }
            Err(_) => summary.unparsable.push(r.doc_id.clone()),
        }
    }
    summary
}
