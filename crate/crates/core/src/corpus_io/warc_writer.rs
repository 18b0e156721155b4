use std::io::Write;

use flate2::write::GzEncoder;
use flate2::Compression;

use crate::error::{Error, Result};

/// Writes WARC/1.0 records, each as its own gzip member.
pub struct WarcWriter<W: Write> {
    sink: W,
}

impl<W: Write> WarcWriter<W> {
    pub fn new(sink: W) -> Self {
        WarcWriter { sink }
    }

    /// Writes a record with an arbitrary type and block.
    pub fn write_record(
        &mut self,
        warc_type: &str,
        record_id: &str,
        target_uri: &str,
        date: &str,
        content_type: &str,
        block: &[u8],
    ) -> Result<()> {
        let mut record = format!(
            "WARC/1.0\r\nWARC-Type: {warc_type}\r\nWARC-Record-ID: {record_id}\r\n\
             WARC-Target-URI: {target_uri}\r\nWARC-Date: {date}\r\nContent-Type: {content_type}\r\n\
             Content-Length: {}\r\n\r\n",
            block.len()
        )
        .into_bytes();
        record.extend_from_slice(block);
        record.extend_from_slice(b"\r\n\r\n");
        self.write_member(&record)
    }

    /// Writes an HTTP 200 `response` record around `body`.
    pub fn write_response(
        &mut self,
        record_id: &str,
        target_uri: &str,
        date: &str,
        http_content_type: &str,
        body: &[u8],
    ) -> Result<()> {
        let mut block = format!("HTTP/1.1 200 OK\r\nContent-Type: {http_content_type}\r\n\r\n").into_bytes();
        block.extend_from_slice(body);
        self.write_record(
            "response",
            record_id,
            target_uri,
            date,
            "application/http; msgtype=response",
            &block,
        )
    }

    /// Compresses `bytes` verbatim as one gzip member.
    pub fn write_member(&mut self, bytes: &[u8]) -> Result<()> {
        let mut enc = GzEncoder::new(&mut self.sink, Compression::default());
        enc.write_all(bytes).map_err(Error::SinkWriteFailure)?;
        enc.finish().map_err(Error::SinkWriteFailure)?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<W> {
        self.sink.flush().map_err(Error::SinkWriteFailure)?;
        Ok(self.sink)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus_io::read_warc_records;

    #[test]
    fn round_trips_through_reader() {
        let mut w = WarcWriter::new(Vec::new());
        w.write_record(
            "request",
            "<urn:uuid:0>",
            "https://a.tw/",
            "2024-06-01T00:00:00Z",
            "application/http",
            b"GET /",
        )
        .unwrap();
        w.write_response(
            "<urn:uuid:1>",
            "https://a.tw/x",
            "2024-06-01T00:00:00Z",
            "text/html; charset=big5",
            "台灣".as_bytes(),
        )
        .unwrap();
        let bytes = w.finish().unwrap();
        let mut reader = read_warc_records(bytes.as_slice());
        let recs: Vec<_> = reader.by_ref().collect::<Result<_>>().unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].warc_record_id, "<urn:uuid:1>");
        assert_eq!(recs[0].content_type, "text/html; charset=big5");
        assert_eq!(recs[0].payload, "台灣".as_bytes());
        assert_eq!(reader.skipped_records(), 1);
    }
}
