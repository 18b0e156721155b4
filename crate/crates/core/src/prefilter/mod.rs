//! Cheap pre-extraction rejection (URL blocklist, fuzzy CJK run test),
//! payload decoding, and main-content extraction from HTML.

mod blocklist;
mod charset;
mod extract;

pub use blocklist::{url_blocked, UrlBlocklist};
pub use charset::decode_payload;
pub use extract::extract_main_text;

use crate::corpus_io::RawRecord;
use crate::verdict::{FilterVerdict, Reason};

/// Minimum run length of in-range characters a page must contain.
pub const DEFAULT_MIN_RUN: usize = 5;

/// Sorted, non-overlapping inclusive codepoint intervals treated as
/// "possibly Traditional Chinese" by the prefilter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzyCjkRange {
    ranges: Vec<(u32, u32)>,
}

impl Default for FuzzyCjkRange {
    /// Hiragana (through U+3090), Katakana, and CJK Unified Ideographs.
    fn default() -> Self {
        FuzzyCjkRange {
            ranges: vec![(0x3040, 0x3090), (0x30A0, 0x30FF), (0x4E00, 0x9FFF)],
        }
    }
}

impl FuzzyCjkRange {
    /// Returns `None` unless the intervals are well-formed, sorted and disjoint.
    pub fn new(ranges: Vec<(u32, u32)>) -> Option<Self> {
        let well_formed = ranges.iter().all(|&(lo, hi)| lo <= hi) && ranges.windows(2).all(|w| w[0].1 < w[1].0);
        well_formed.then_some(FuzzyCjkRange { ranges })
    }

    pub fn contains(&self, c: char) -> bool {
        let cp = c as u32;
        self.ranges.iter().any(|&(lo, hi)| (lo..=hi).contains(&cp))
    }

    /// True iff `text` holds at least `min_run` adjacent in-range characters.
    pub fn has_run(&self, text: &str, min_run: usize) -> bool {
        assert!(min_run >= 1, "min_run must be at least 1");
        let mut run = 0;
        for c in text.chars() {
            if self.contains(c) {
                run += 1;
                if run >= min_run {
                    return true;
                }
            } else {
                run = 0;
            }
        }
        false
    }
}

/// [`FuzzyCjkRange::has_run`] over the default ranges.
pub fn has_fuzzy_cjk_run(text: &str, min_run: usize) -> bool {
    FuzzyCjkRange::default().has_run(text, min_run)
}

/// URL check first, then the CJK run test on the decoded raw payload.
/// Never looks at extracted text.
pub fn prefilter_document(record: &RawRecord, blocklist: &UrlBlocklist) -> FilterVerdict {
    if url_blocked(&record.target_url, blocklist) {
        return FilterVerdict::remove(Reason::UrlBlocked);
    }
    let decoded = decode_payload(&record.payload, &record.content_type);
    if !has_fuzzy_cjk_run(&decoded, DEFAULT_MIN_RUN) {
        return FilterVerdict::remove(Reason::NoCjkRun);
    }
    FilterVerdict::KEEP
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn record(url: &str, body: &str) -> RawRecord {
        RawRecord {
            warc_record_id: "<urn:uuid:t>".into(),
            target_url: url.into(),
            fetch_date: String::new(),
            content_type: "text/html".into(),
            payload: body.as_bytes().to_vec(),
        }
    }

    #[test]
    fn run_examples() {
        assert!(has_fuzzy_cjk_run("台灣的天氣很好", 5));
        assert!(!has_fuzzy_cjk_run("hello world", 5));
        assert!(!has_fuzzy_cjk_run("ab中文de中文中", 5));
        assert!(!has_fuzzy_cjk_run("中文 中文中", 5));
        assert!(has_fuzzy_cjk_run("ひらがなカタ", 5));
    }

    #[test]
    fn range_boundaries() {
        let r = FuzzyCjkRange::default();
        for cp in [0x3040, 0x3090, 0x30A0, 0x30FF, 0x4E00, 0x9FFF] {
            assert!(r.contains(char::from_u32(cp).unwrap()), "{cp:#x}");
        }
        for cp in [0x303F, 0x3091, 0x309F, 0x4DFF, 0xA000] {
            assert!(!r.contains(char::from_u32(cp).unwrap()), "{cp:#x}");
        }
    }

    #[test]
    fn rejects_overlapping_ranges() {
        assert!(FuzzyCjkRange::new(vec![(1, 5), (5, 9)]).is_none());
        assert!(FuzzyCjkRange::new(vec![(5, 9), (1, 3)]).is_none());
        assert!(FuzzyCjkRange::new(vec![(1, 3), (5, 9)]).is_some());
    }

    #[test]
    fn prefilter_order() {
        let mut bl = UrlBlocklist::default();
        bl.exact_hosts.insert("spam.example".into());
        assert_eq!(
            prefilter_document(&record("https://spam.example/x", "中文中文中文"), &bl).reason,
            Reason::UrlBlocked
        );
        assert_eq!(
            prefilter_document(&record("https://ok.example/x", "English only"), &bl).reason,
            Reason::NoCjkRun
        );
        assert!(prefilter_document(&record("https://ok.example/x", "<p>中文中文中文</p>"), &bl).keep);
    }

    proptest! {
        #[test]
        fn appending_never_destroys_a_run(t in "[a-z中文字 ]{0,30}", s in "\\PC{0,30}") {
            if has_fuzzy_cjk_run(&t, 5) {
                let joined = format!("{t}{s}");
                prop_assert!(has_fuzzy_cjk_run(&joined, 5));
            }
        }
    }
}
