//! Curation pipeline for building a Traditional Chinese pretraining corpus
//! from Common Crawl WARC archives.
//!
//! Stages run in a fixed order: WARC read and prefilter, main-content
//! extraction, language identification, Gopher, C4 and FineWeb quality
//! heuristics, minhash deduplication, and frequent-line trimming. The
//! [`eval`] module holds the sampling, rubric-scoring and significance-test
//! tooling used to compare corpora taken from different stages.

pub mod corpus_io;
pub mod datafile;
pub mod dedup;
pub mod error;
pub mod eval;
pub mod langid;
pub mod pipeline;
pub mod prefilter;
pub mod quality;
pub mod verdict;

pub use corpus_io::{Document, RawRecord};
pub use error::{Error, Result};
pub use verdict::{FilterVerdict, Reason};
