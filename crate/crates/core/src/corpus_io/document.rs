use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use sha1::{Digest, Sha1};

/// A `response` record pulled out of a WARC archive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawRecord {
    pub warc_record_id: String,
    pub target_url: String,
    pub fetch_date: String,
    /// HTTP `Content-Type` of the response, falling back to the WARC header.
    pub content_type: String,
    /// HTTP response body with the status line and headers stripped.
    pub payload: Vec<u8>,
}

/// Stable document id: lowercase SHA-1 hex of the WARC record id.
pub fn document_id(warc_record_id: &str) -> String {
    let digest = Sha1::digest(warc_record_id.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// One web page as it moves through the pipeline.
///
/// The text never contains NUL characters; `byte_len` always reflects the
/// current text because it is derived from it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    #[serde(default)]
    pub url: String,
    #[serde(default)]
    pub date: String,
    #[serde(deserialize_with = "de_text")]
    text: String,
    #[serde(default)]
    pub meta: BTreeMap<String, String>,
}

fn de_text<'de, D: serde::Deserializer<'de>>(d: D) -> Result<String, D::Error> {
    let text = String::deserialize(d)?;
    Ok(strip_nul(text))
}

fn strip_nul(text: String) -> String {
    if text.contains('\0') {
        text.replace('\0', "")
    } else {
        text
    }
}

impl Document {
    pub fn new(
        id: impl Into<String>,
        url: impl Into<String>,
        date: impl Into<String>,
        text: impl Into<String>,
    ) -> Self {
        Document {
            id: id.into(),
            url: url.into(),
            date: date.into(),
            text: strip_nul(text.into()),
            meta: BTreeMap::new(),
        }
    }

    /// Builds a document from a raw record and already-decoded text.
    pub fn from_record(record: &RawRecord, text: impl Into<String>) -> Self {
        Document::new(
            document_id(&record.warc_record_id),
            record.target_url.clone(),
            record.fetch_date.clone(),
            text,
        )
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn set_text(&mut self, text: impl Into<String>) {
        self.text = strip_nul(text.into());
    }

    pub fn into_text(self) -> String {
        self.text
    }

    /// UTF-8 byte count of the text.
    pub fn byte_len(&self) -> usize {
        self.text.len()
    }

    pub fn annotate(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.meta.insert(key.into(), value.into());
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn id_is_sha1_hex() {
        // sha1("abc")
        assert_eq!(document_id("abc"), "a9993e364706816aba3e25717850c26c9cd0d89d");
        assert_eq!(document_id("<urn:uuid:1>").len(), 40);
    }

    #[test]
    fn nul_is_stripped_and_len_tracks_text() {
        let mut d = Document::new("x", "", "", "a\0b");
        assert_eq!(d.text(), "ab");
        assert_eq!(d.byte_len(), 2);
        d.set_text("中文\0");
        assert_eq!(d.text(), "中文");
        assert_eq!(d.byte_len(), 6);
    }
}
