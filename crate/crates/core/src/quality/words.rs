/// CJK Unified Ideographs block; each codepoint counts as one word.
pub fn is_cjk_word_char(c: char) -> bool {
    ('\u{4E00}'..='\u{9FFF}').contains(&c)
}

/// Number of CJK ideographs plus the number of whitespace-delimited tokens
/// that contain no CJK ideograph.
pub fn word_count(text: &str) -> usize {
    let mut count = 0;
    for token in text.split_whitespace() {
        let cjk = token.chars().filter(|&c| is_cjk_word_char(c)).count();
        count += if cjk == 0 { 1 } else { cjk };
    }
    count
}

/// LF-split lines with surrounding whitespace removed, skipping blank ones.
pub fn content_lines(text: &str) -> impl Iterator<Item = &str> {
    text.split('\n').map(str::trim).filter(|l| !l.is_empty())
}
