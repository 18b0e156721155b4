use std::fmt;

use serde::{Deserialize, Serialize};

/// Why a document was kept or removed. Declaration order is the order used
/// when reason tallies are serialized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Reason {
    Kept,
    UrlBlocked,
    NoCjkRun,
    LowLangConfidence,
    SimplifiedScript,
    BlockedPhrase,
    TooShort,
    TooLong,
    SymbolRatio,
    EllipsisLines,
    NoStopWords,
    BracketRatio,
    LinePunctRatio,
    ShortLineRatio,
    CharDupRatio,
    NewLineRatio,
    Duplicate,
    /// Every line of the document was stripped by frequent-line trimming.
    EmptyAfterTrim,
}

impl Reason {
    pub fn as_str(self) -> &'static str {
        match self {
            Reason::Kept => "Kept",
            Reason::UrlBlocked => "UrlBlocked",
            Reason::NoCjkRun => "NoCjkRun",
            Reason::LowLangConfidence => "LowLangConfidence",
            Reason::SimplifiedScript => "SimplifiedScript",
            Reason::BlockedPhrase => "BlockedPhrase",
            Reason::TooShort => "TooShort",
            Reason::TooLong => "TooLong",
            Reason::SymbolRatio => "SymbolRatio",
            Reason::EllipsisLines => "EllipsisLines",
            Reason::NoStopWords => "NoStopWords",
            Reason::BracketRatio => "BracketRatio",
            Reason::LinePunctRatio => "LinePunctRatio",
            Reason::ShortLineRatio => "ShortLineRatio",
            Reason::CharDupRatio => "CharDupRatio",
            Reason::NewLineRatio => "NewLineRatio",
            Reason::Duplicate => "Duplicate",
            Reason::EmptyAfterTrim => "EmptyAfterTrim",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Keep/remove decision. `keep` holds iff `reason == Reason::Kept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterVerdict {
    pub keep: bool,
    pub reason: Reason,
    /// The measured quantity that triggered removal, when there is one.
    pub metric_value: Option<f64>,
}

impl FilterVerdict {
    pub const KEEP: FilterVerdict = FilterVerdict {
        keep: true,
        reason: Reason::Kept,
        metric_value: None,
    };

    pub fn remove(reason: Reason) -> Self {
        debug_assert!(reason != Reason::Kept);
        FilterVerdict {
            keep: false,
            reason,
            metric_value: None,
        }
    }

    pub fn remove_with(reason: Reason, metric: f64) -> Self {
        FilterVerdict {
            metric_value: Some(metric),
            ..Self::remove(reason)
        }
    }

    pub fn is_keep(&self) -> bool {
        self.keep
    }
}
