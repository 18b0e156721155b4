use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed gzip member at byte offset {offset}: {source}")]
    MalformedGzipMember {
        offset: u64,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed WARC header at byte offset {offset}: {message}")]
    MalformedWarcHeader { offset: u64, message: String },

    #[error("malformed JSONL at line {line}: {message}")]
    MalformedLine { line: usize, message: String },

    #[error("failed writing output: {0}")]
    SinkWriteFailure(#[source] std::io::Error),

    #[error("language scorer unavailable: {0}")]
    ScorerUnavailable(String),

    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),

    #[error("invalid data file {path}: {message}")]
    InvalidDataFile { path: PathBuf, message: String },

    #[error("empty shingle set")]
    EmptyShingleSet,

    #[error("invalid signature shard: {0}")]
    InvalidShard(String),

    #[error("unparsable scoring response for {doc_id}")]
    UnparsableResponse { doc_id: String },

    #[error("each sample needs at least two observations (got {a} and {b})")]
    InsufficientSamples { a: usize, b: usize },

    #[error("sample variance is zero")]
    DegenerateVariance,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
