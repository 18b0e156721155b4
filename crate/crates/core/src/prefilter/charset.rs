use std::borrow::Cow;

use encoding_rs::{Encoding, UTF_8};

/// Decodes a response payload: the `charset` parameter of `content_type`
/// wins when it names a known encoding, otherwise UTF-8 with U+FFFD for
/// invalid sequences.
pub fn decode_payload(payload: &[u8], content_type: &str) -> String {
    let encoding = declared_charset(content_type)
        .and_then(|label| Encoding::for_label(label.as_bytes()))
        .unwrap_or(UTF_8);
    let (text, _, _) = encoding.decode(payload);
    match text {
        Cow::Borrowed(s) => s.to_string(),
        Cow::Owned(s) => s,
    }
}

fn declared_charset(content_type: &str) -> Option<String> {
    content_type.split(';').skip(1).find_map(|param| {
        let (k, v) = param.split_once('=')?;
        k.trim()
            .eq_ignore_ascii_case("charset")
            .then(|| v.trim().trim_matches(|c| c == '"' || c == '\'').to_string())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn honors_declared_big5() {
        let (bytes, _, _) = encoding_rs::BIG5.encode("臺灣");
        assert_eq!(decode_payload(&bytes, "text/html; charset=big5"), "臺灣");
        // Without the declaration the bytes are not valid UTF-8.
        assert!(decode_payload(&bytes, "text/html").contains('\u{FFFD}'));
    }

    #[test]
    fn utf8_default_and_unknown_label() {
        assert_eq!(decode_payload("中文".as_bytes(), ""), "中文");
        assert_eq!(decode_payload("中文".as_bytes(), "text/html; charset=bogus"), "中文");
        assert_eq!(
            decode_payload("中文".as_bytes(), "text/html; Charset=\"UTF-8\""),
            "中文"
        );
    }
}
