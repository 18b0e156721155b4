use std::collections::HashMap;

use crate::corpus_io::Document;

pub const DEFAULT_TRIM_THRESHOLD: u64 = 100;

/// Occurrence counts of whitespace-trimmed, non-empty lines across a dump.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LineFrequencyTable {
    counts: HashMap<String, u64>,
}

impl LineFrequencyTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_text(&mut self, text: &str) {
        for line in text.split('\n').map(str::trim).filter(|l| !l.is_empty()) {
            match self.counts.get_mut(line) {
                Some(n) => *n += 1,
                None => {
                    self.counts.insert(line.to_string(), 1);
                }
            }
        }
    }

    pub fn add_document(&mut self, doc: &Document) {
        self.add_text(doc.text());
    }

    /// Adds another shard's counts into this one.
    pub fn merge(&mut self, other: LineFrequencyTable) {
        for (line, n) in other.counts {
            *self.counts.entry(line).or_default() += n;
        }
    }

    pub fn count(&self, line: &str) -> u64 {
        self.counts.get(line.trim()).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

pub fn build_line_frequency<'a, I>(docs: I) -> LineFrequencyTable
where
    I: IntoIterator<Item = &'a Document>,
{
    let mut table = LineFrequencyTable::new();
    for doc in docs {
        table.add_document(doc);
    }
    table
}

/// Strips lines from the front, then the back, while they occur more than
/// `threshold` times in the dump. Blank lines next to a stripped line go
/// with it; interior lines are never touched.
pub fn trim_frequent_lines(doc: &Document, table: &LineFrequencyTable, threshold: u64) -> Document {
    let lines: Vec<&str> = doc.text().split('\n').collect();
    let hot = |l: &str| !l.trim().is_empty() && table.count(l) > threshold;

    let mut start = 0;
    let mut probe = 0;
    while probe < lines.len() {
        if lines[probe].trim().is_empty() {
            probe += 1;
        } else if hot(lines[probe]) {
            probe += 1;
            while probe < lines.len() && lines[probe].trim().is_empty() {
                probe += 1;
            }
            start = probe;
        } else {
            break;
        }
    }

    let mut end = lines.len();
    let mut probe = lines.len();
    while probe > start {
        let line = lines[probe - 1];
        if line.trim().is_empty() {
            probe -= 1;
        } else if hot(line) {
            probe -= 1;
            while probe > start && lines[probe - 1].trim().is_empty() {
                probe -= 1;
            }
            end = probe;
        } else {
            break;
        }
    }

    let mut out = doc.clone();
    if start > 0 || end < lines.len() {
        out.set_text(lines[start..end.max(start)].join("\n"));
    }
    out
}
