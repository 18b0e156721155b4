//! WARC ingestion and the JSONL interchange format used between stages.

mod document;
mod jsonl;
mod warc;
mod warc_writer;

pub use document::{document_id, Document, RawRecord};
pub use jsonl::{read_documents_jsonl, write_documents_jsonl, JsonlReader, OnMalformed};
pub use warc::{read_warc_records, WarcReader};
pub use warc_writer::WarcWriter;
