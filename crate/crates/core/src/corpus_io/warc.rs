use std::collections::VecDeque;
use std::io::{self, BufRead, Read};

use flate2::bufread::GzDecoder;
use log::warn;

use super::document::RawRecord;
use crate::error::{Error, Result};

/// Streams `response` records from a gzip-member-per-record WARC archive.
pub fn read_warc_records<R: BufRead>(archive: R) -> WarcReader<R> {
    WarcReader::new(archive)
}

/// [`BufRead`] adapter that tracks how many bytes have been consumed, so
/// member boundaries can be reported as stream offsets.
struct Counting<R> {
    inner: R,
    pos: u64,
}

impl<R: BufRead> Read for Counting<R> {
    fn read(&mut self, buf: &mut [u8]) -> io::Result<usize> {
        let n = self.inner.read(buf)?;
        self.pos += n as u64;
        Ok(n)
    }
}

impl<R: BufRead> BufRead for Counting<R> {
    fn fill_buf(&mut self) -> io::Result<&[u8]> {
        self.inner.fill_buf()
    }

    fn consume(&mut self, amt: usize) {
        self.pos += amt as u64;
        self.inner.consume(amt);
    }
}

/// Iterator over the `response` records of one archive.
///
/// Each gzip member is decompressed on its own, so memory use is bounded by
/// the largest single record. A broken gzip member yields
/// [`Error::MalformedGzipMember`] and ends iteration; records with unreadable
/// WARC headers are skipped and tallied in [`WarcReader::corrupt_records`].
pub struct WarcReader<R> {
    input: Counting<R>,
    pending: VecDeque<RawRecord>,
    corrupt: u64,
    skipped: u64,
    done: bool,
}

impl<R: BufRead> WarcReader<R> {
    pub fn new(archive: R) -> Self {
        WarcReader {
            input: Counting { inner: archive, pos: 0 },
            pending: VecDeque::new(),
            corrupt: 0,
            skipped: 0,
            done: false,
        }
    }

    /// Records dropped because their WARC header could not be parsed.
    pub fn corrupt_records(&self) -> u64 {
        self.corrupt
    }

    /// Well-formed records that were not of type `response`.
    pub fn skipped_records(&self) -> u64 {
        self.skipped
    }

    /// Bytes of the compressed stream consumed so far.
    pub fn position(&self) -> u64 {
        self.input.pos
    }

    fn read_member(&mut self) -> Option<Result<()>> {
        match self.input.fill_buf() {
            Ok([]) => return None,
            Ok(_) => {}
            Err(e) => {
                return Some(Err(Error::MalformedGzipMember {
                    offset: self.input.pos,
                    source: e,
                }))
            }
        }
        let offset = self.input.pos;
        let mut block = Vec::new();
        if let Err(e) = GzDecoder::new(&mut self.input).read_to_end(&mut block) {
            return Some(Err(Error::MalformedGzipMember { offset, source: e }));
        }
        self.parse_member(&block, offset);
        Some(Ok(()))
    }

    fn parse_member(&mut self, mut data: &[u8], offset: u64) {
        while !data.iter().all(|b| b.is_ascii_whitespace()) {
            match parse_record(data) {
                Ok((parsed, rest)) => {
                    match parsed {
                        Some(record) => self.pending.push_back(record),
                        None => self.skipped += 1,
                    }
                    data = rest;
                }
                Err(message) => {
                    warn!("skipping corrupt WARC record in member at offset {offset}: {message}");
                    self.corrupt += 1;
                    // No reliable resync point inside a member.
                    return;
                }
            }
        }
    }
}

impl<R: BufRead> Iterator for WarcReader<R> {
    type Item = Result<RawRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if let Some(record) = self.pending.pop_front() {
                return Some(Ok(record));
            }
            if self.done {
                return None;
            }
            match self.read_member() {
                None => {
                    self.done = true;
                    return None;
                }
                Some(Ok(())) => {}
                Some(Err(e)) => {
                    self.done = true;
                    return Some(Err(e));
                }
            }
        }
    }
}

/// Splits one line (LF or CRLF terminated) off the front of `data`.
fn split_line(data: &[u8]) -> Option<(&[u8], &[u8])> {
    let nl = data.iter().position(|&b| b == b'\n')?;
    let line = &data[..nl];
    let line = line.strip_suffix(b"\r").unwrap_or(line);
    Some((line, &data[nl + 1..]))
}

struct Headers(Vec<(String, String)>);

impl Headers {
    fn get(&self, name: &str) -> Option<&str> {
        self.0
            .iter()
            .find(|(k, _)| k.eq_ignore_ascii_case(name))
            .map(|(_, v)| v.as_str())
    }
}

/// Parses `Name: value` lines up to the first blank line.
fn parse_headers(mut data: &[u8]) -> std::result::Result<(Headers, &[u8]), String> {
    let mut headers = Vec::new();
    loop {
        let (line, rest) = split_line(data).ok_or("header block not terminated")?;
        data = rest;
        if line.is_empty() {
            return Ok((Headers(headers), data));
        }
        if line[0] == b' ' || line[0] == b'\t' {
            // folded continuation line
            if let Some((_, value)) = headers.last_mut() {
                value.push(' ');
                value.push_str(String::from_utf8_lossy(line).trim());
                continue;
            }
            return Err("continuation line before any header".into());
        }
        let text = String::from_utf8_lossy(line);
        let (name, value) = text
            .split_once(':')
            .ok_or_else(|| format!("header line without colon: {text:?}"))?;
        headers.push((name.trim().to_string(), value.trim().to_string()));
    }
}

/// Parses one WARC record from the front of `data`, returning the record if
/// it is a `response` and the remaining bytes.
fn parse_record(data: &[u8]) -> std::result::Result<(Option<RawRecord>, &[u8]), String> {
    let start = data.iter().position(|b| !b.is_ascii_whitespace()).unwrap_or(data.len());
    let (version, rest) = split_line(&data[start..]).ok_or("missing version line")?;
    if !version.starts_with(b"WARC/1.") {
        return Err(format!(
            "unsupported version line {:?}",
            String::from_utf8_lossy(version)
        ));
    }
    let (headers, body) = parse_headers(rest)?;
    let len: usize = headers
        .get("Content-Length")
        .ok_or("missing Content-Length")?
        .parse()
        .map_err(|_| "Content-Length is not a number")?;
    if body.len() < len {
        return Err(format!("block truncated: {} of {len} bytes", body.len()));
    }
    let (block, rest) = body.split_at(len);

    let warc_type = headers.get("WARC-Type").ok_or("missing WARC-Type")?;
    if !warc_type.eq_ignore_ascii_case("response") {
        return Ok((None, rest));
    }
    let warc_record_id = headers
        .get("WARC-Record-ID")
        .filter(|id| !id.is_empty())
        .ok_or("missing WARC-Record-ID")?
        .to_string();

    let (content_type, payload) = split_http(block);
    let content_type = content_type
        .or_else(|| headers.get("Content-Type").map(str::to_string))
        .unwrap_or_default();

    let record = RawRecord {
        warc_record_id,
        target_url: headers.get("WARC-Target-URI").unwrap_or_default().to_string(),
        fetch_date: headers.get("WARC-Date").unwrap_or_default().to_string(),
        content_type,
        payload: payload.to_vec(),
    };
    Ok((Some(record), rest))
}

/// Strips an HTTP status line and headers from a response block.
fn split_http(block: &[u8]) -> (Option<String>, &[u8]) {
    if !block.starts_with(b"HTTP/") {
        return (None, block);
    }
    let Some((_, rest)) = split_line(block) else {
        return (None, &[]);
    };
    match parse_headers(rest) {
        Ok((headers, payload)) => (headers.get("Content-Type").map(str::to_string), payload),
        Err(_) => (None, &[]),
    }
}
