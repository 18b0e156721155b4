use std::collections::HashSet;

use xxhash_rust::xxh3::{xxh3_64, xxh3_64_with_seed};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinhashParams {
    /// Codepoints per shingle.
    pub shingle_size: usize,
    pub num_permutations: usize,
    pub num_bands: usize,
    pub rows_per_band: usize,
    pub hash_seed: u64,
}

impl Default for MinhashParams {
    fn default() -> Self {
        MinhashParams {
            shingle_size: 5,
            num_permutations: 112,
            num_bands: 14,
            rows_per_band: 8,
            hash_seed: 1,
        }
    }
}

impl MinhashParams {
    pub fn validate(&self) -> std::result::Result<(), String> {
        if self.shingle_size == 0 {
            return Err("shingle_size must be at least 1".into());
        }
        if self.num_bands == 0 || self.num_bands * self.rows_per_band != self.num_permutations {
            return Err(format!(
                "num_bands ({}) x rows_per_band ({}) must equal num_permutations ({})",
                self.num_bands, self.rows_per_band, self.num_permutations
            ));
        }
        Ok(())
    }

    /// Per-permutation XOR keys, drawn from a splitmix64 stream on the seed.
    fn permutation_keys(&self) -> Vec<u64> {
        let mut state = self.hash_seed;
        (0..self.num_permutations)
            .map(|_| {
                state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
                fmix64(state)
            })
            .collect()
    }
}

/// MurmurHash3 64-bit finalizer; a bijection on u64.
fn fmix64(mut x: u64) -> u64 {
    x ^= x >> 33;
    x = x.wrapping_mul(0xff51_afd7_ed55_8ccd);
    x ^= x >> 33;
    x = x.wrapping_mul(0xc4ce_b9fe_1a85_ec53);
    x ^= x >> 33;
    x
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinhashSignature {
    values: Vec<u64>,
}

impl MinhashSignature {
    pub fn from_values(values: Vec<u64>) -> Self {
        MinhashSignature { values }
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Fraction of coordinates on which two signatures agree.
    pub fn agreement(&self, other: &MinhashSignature) -> f64 {
        assert_eq!(self.len(), other.len(), "signature lengths differ");
        let same = self.values.iter().zip(&other.values).filter(|(a, b)| a == b).count();
        same as f64 / self.len().max(1) as f64
    }
}

/// Collapses whitespace runs to one space and trims the ends.
pub fn normalize_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Byte ranges of every `n`-codepoint window; the whole string when it is
/// shorter than `n`.
fn shingle_spans(normalized: &str, n: usize) -> Vec<&str> {
    if normalized.is_empty() {
        return Vec::new();
    }
    let bounds: Vec<usize> = normalized
        .char_indices()
        .map(|(i, _)| i)
        .chain(std::iter::once(normalized.len()))
        .collect();
    let chars = bounds.len() - 1;
    if chars < n {
        return vec![normalized];
    }
    (0..=chars - n).map(|i| &normalized[bounds[i]..bounds[i + n]]).collect()
}

pub fn shingles(text: &str, n: usize) -> HashSet<String> {
    assert!(n >= 1, "shingle size must be at least 1");
    let normalized = normalize_whitespace(text);
    shingle_spans(&normalized, n).into_iter().map(str::to_string).collect()
}

struct Hasher {
    seed: u64,
    keys: Vec<u64>,
}

impl Hasher {
    fn new(params: &MinhashParams) -> Self {
        Hasher {
            seed: params.hash_seed,
            keys: params.permutation_keys(),
        }
    }

    fn fold(&self, mins: &mut [u64], shingle: &str) {
        let base = xxh3_64_with_seed(shingle.as_bytes(), self.seed);
        for (m, k) in mins.iter_mut().zip(&self.keys) {
            let h = fmix64(base ^ k);
            if h < *m {
                *m = h;
            }
        }
    }
}

/// `values[i]` is the minimum of the i-th hash function over the set.
pub fn minhash_signature<I, S>(shingle_set: I, params: &MinhashParams) -> Result<MinhashSignature>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let hasher = Hasher::new(params);
    let mut mins = vec![u64::MAX; params.num_permutations];
    let mut any = false;
    for s in shingle_set {
        hasher.fold(&mut mins, s.as_ref());
        any = true;
    }
    if !any {
        return Err(Error::EmptyShingleSet);
    }
    Ok(MinhashSignature { values: mins })
}

/// Shingles and signs `text` without materializing the shingle set.
/// `None` when the text has no shingles.
pub fn signature_for_text(text: &str, params: &MinhashParams) -> Option<MinhashSignature> {
    let normalized = normalize_whitespace(text);
    let spans = shingle_spans(&normalized, params.shingle_size);
    minhash_signature(spans, params).ok()
}

/// One key per band, each a hash of the band index and its rows.
pub fn lsh_bucket_keys(sig: &MinhashSignature, params: &MinhashParams) -> Vec<u64> {
    assert_eq!(sig.len(), params.num_permutations, "signature does not match params");
    let mut buf = Vec::with_capacity(8 * (params.rows_per_band + 1));
    sig.values
        .chunks(params.rows_per_band)
        .enumerate()
        .map(|(band, rows)| {
            buf.clear();
            buf.extend_from_slice(&(band as u64).to_le_bytes());
            for v in rows {
                buf.extend_from_slice(&v.to_le_bytes());
            }
            xxh3_64(&buf)
        })
        .collect()
}
