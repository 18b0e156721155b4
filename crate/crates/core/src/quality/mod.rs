//! Heuristic quality filters: Gopher document rules, C4 line and bracket
//! rules, FineWeb line-structure rules.
//!
//! Every threshold is strict in the direction stated by its config field:
//! a value exactly at a threshold passes.

mod c4;
mod config;
mod fineweb;
mod gopher;
mod words;

pub use c4::{bracket_ratio, c4_document_filter, c4_line_filter, is_bracket};
pub use config::{NewLineDenominator, QualityConfig, DEFAULT_TERMINAL_PUNCTUATION};
pub use fineweb::{char_dup_ratio, fineweb_filter, line_punct_ratio, new_line_ratio, short_line_ratio};
pub use gopher::{ellipsis_line_ratio, gopher_filter, symbol_word_ratio};
pub use words::{content_lines, is_cjk_word_char, word_count};
