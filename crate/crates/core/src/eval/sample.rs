use std::io::BufRead;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus_io::{read_documents_jsonl, Document};
use crate::error::Result;

/// Uniform single-pass sample of `min(n, len)` items (Algorithm R).
pub fn reservoir_sample<T, I: IntoIterator<Item = T>>(items: I, n: usize, seed: u64) -> Vec<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reservoir = Vec::with_capacity(n.min(1 << 16));
    if n == 0 {
        return reservoir;
    }
    for (i, item) in items.into_iter().enumerate() {
        if i < n {
            reservoir.push(item);
        } else {
            let j = rng.gen_range(0..=i);
            if j < n {
                reservoir[j] = item;
            }
        }
    }
    reservoir
}

/// Reservoir-samples documents from a JSONL source.
pub fn sample_documents<R: BufRead>(corpus: R, n: usize, seed: u64) -> Result<Vec<Document>> {
    let mut err = None;
    let docs = read_documents_jsonl(corpus).map_while(|r| match r {
        Ok(d) => Some(d),
        Err(e) => {
            err = Some(e);
            None
        }
    });
    let sample = reservoir_sample(docs, n, seed);
    if let Some(e) = err {
        return Err(e);
    }
    if sample.is_empty() {
        log::warn!("empty corpus, nothing sampled");
    }
    Ok(sample)
}
