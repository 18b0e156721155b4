use std::io::{BufRead, Write};

use super::document::Document;
use crate::error::{Error, Result};

/// Writes one JSON object per line with keys in the fixed order
/// `id, url, date, text, meta`.
pub fn write_documents_jsonl<'a, I, W>(docs: I, mut sink: W) -> Result<usize>
where
    I: IntoIterator<Item = &'a Document>,
    W: Write,
{
    let mut n = 0;
    for doc in docs {
        serde_json::to_writer(&mut sink, doc).map_err(|e| match e.io_error_kind() {
            Some(_) => Error::SinkWriteFailure(e.into()),
            None => Error::Json(e),
        })?;
        sink.write_all(b"\n").map_err(Error::SinkWriteFailure)?;
        n += 1;
    }
    sink.flush().map_err(Error::SinkWriteFailure)?;
    Ok(n)
}

/// What to do with a line that does not decode as a [`Document`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum OnMalformed {
    #[default]
    Abort,
    Skip,
}

pub fn read_documents_jsonl<R: BufRead>(source: R) -> JsonlReader<R> {
    JsonlReader::new(source, OnMalformed::Abort)
}

/// Lazy line-at-a-time JSONL document reader. Blank lines are ignored.
pub struct JsonlReader<R> {
    source: R,
    policy: OnMalformed,
    line_no: usize,
    skipped: usize,
    buf: String,
    done: bool,
}

impl<R: BufRead> JsonlReader<R> {
    pub fn new(source: R, policy: OnMalformed) -> Self {
        JsonlReader {
            source,
            policy,
            line_no: 0,
            skipped: 0,
            buf: String::new(),
            done: false,
        }
    }

    /// Lines dropped under [`OnMalformed::Skip`].
    pub fn skipped(&self) -> usize {
        self.skipped
    }
}

impl<R: BufRead> Iterator for JsonlReader<R> {
    type Item = Result<Document>;

    fn next(&mut self) -> Option<Self::Item> {
        while !self.done {
            self.buf.clear();
            self.line_no += 1;
            match self.source.read_line(&mut self.buf) {
                Ok(0) => self.done = true,
                Ok(_) => {
                    let line = self.buf.trim();
                    if line.is_empty() {
                        continue;
                    }
                    match serde_json::from_str::<Document>(line) {
                        Ok(doc) => return Some(Ok(doc)),
                        Err(e) if self.policy == OnMalformed::Skip => {
                            log::warn!("skipping malformed line {}: {e}", self.line_no);
                            self.skipped += 1;
                        }
                        Err(e) => {
                            self.done = true;
                            return Some(Err(Error::MalformedLine {
                                line: self.line_no,
                                message: e.to_string(),
                            }));
                        }
                    }
                }
                Err(e) => {
                    self.done = true;
                    return Some(Err(Error::MalformedLine {
                        line: self.line_no,
                        message: e.to_string(),
                    }));
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn doc(text: &str) -> Document {
        let mut d = Document::new("id1", "https://x.tw/", "2024-06-01", text);
        d.annotate("lang", "zh");
        d
    }

    #[test]
    fn empty_sequence_writes_nothing() {
        let mut out = Vec::new();
        assert_eq!(write_documents_jsonl(&[], &mut out).unwrap(), 0);
        assert!(out.is_empty());
    }

    #[test]
    fn newline_is_escaped_and_keys_are_ordered() {
        let mut out = Vec::new();
        write_documents_jsonl(&[doc("a\nb")], &mut out).unwrap();
        let s = String::from_utf8(out).unwrap();
        assert_eq!(s.lines().count(), 1);
        assert_eq!(
            s,
            "{\"id\":\"id1\",\"url\":\"https://x.tw/\",\"date\":\"2024-06-01\",\
             \"text\":\"a\\nb\",\"meta\":{\"lang\":\"zh\"}}\n"
        );
    }

    #[test]
    fn blank_trailing_line_is_ignored() {
        let input = "{\"id\":\"a\",\"url\":\"\",\"date\":\"\",\"text\":\"x\",\"meta\":{}}\n\n   \n";
        let docs: Vec<_> = read_documents_jsonl(input.as_bytes()).collect::<Result<_>>().unwrap();
        assert_eq!(docs.len(), 1);
        assert_eq!(docs[0].byte_len(), 1);
    }

    #[test]
    fn missing_text_is_malformed() {
        let input = "{\"id\":\"a\",\"url\":\"\",\"date\":\"\",\"meta\":{}}\n";
        match read_documents_jsonl(input.as_bytes()).next() {
            Some(Err(Error::MalformedLine { line: 1, .. })) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn skip_policy_continues_past_bad_lines() {
        let input = "not json\n{\"id\":\"b\",\"text\":\"ok\"}\n";
        let mut reader = JsonlReader::new(input.as_bytes(), OnMalformed::Skip);
        let docs: Vec<_> = reader.by_ref().collect::<Result<_>>().unwrap();
        assert_eq!(docs.len(), 1);
        assert_eq!(reader.skipped(), 1);
    }

    #[test]
    fn abort_policy_stops_after_error() {
        let input = "not json\n{\"id\":\"b\",\"text\":\"ok\"}\n";
        let out: Vec<_> = read_documents_jsonl(input.as_bytes()).collect();
        assert_eq!(out.len(), 1);
        assert!(out[0].is_err());
    }

    proptest! {
        #[test]
        fn round_trip(
            docs in prop::collection::vec(
                (
                    "[a-f0-9]{1,40}",
                    "\\PC{0,30}",
                    "[0-9T:-]{0,20}",
                    "[^\u{0}]{0,200}",
                    prop::collection::btree_map("[a-z_]{1,8}", "\\PC{0,10}", 0..4),
                ),
                0..8,
            )
        ) {
            let docs: Vec<Document> = docs
                .into_iter()
                .map(|(id, url, date, text, meta)| {
                    let mut d = Document::new(id, url, date, text);
                    d.meta = meta;
                    d
                })
                .collect();
            let mut buf = Vec::new();
            let n = write_documents_jsonl(&docs, &mut buf).unwrap();
            prop_assert_eq!(n, docs.len());
            let back: Vec<Document> = read_documents_jsonl(buf.as_slice())
                .collect::<Result<_>>()
                .unwrap();
            prop_assert_eq!(back, docs);
        }
    }
}
