//! Near-duplicate removal with minhash + LSH banding, and trimming of
//! boilerplate lines that recur at document edges across a dump.

mod cluster;
mod lines;
mod minhash;
mod shard;

pub use cluster::cluster_and_select;
pub use lines::{build_line_frequency, trim_frequent_lines, LineFrequencyTable, DEFAULT_TRIM_THRESHOLD};
pub use minhash::{
    lsh_bucket_keys, minhash_signature, normalize_whitespace, shingles, signature_for_text, MinhashParams,
    MinhashSignature,
};
pub use shard::{write_signature_shard, SignatureShardReader, SignatureShardWriter};
