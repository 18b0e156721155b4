//! Compact binary persistence for minhash signatures.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! header:  b"TWMH" | version: u16 | shingle_size: u32 | num_permutations: u32
//!          | num_bands: u32 | rows_per_band: u32 | hash_seed: u64
//! record:  id_len: u32 | id: [u8; id_len] (UTF-8) | has_signature: u8
//!          | values: [u64; num_permutations] (only when has_signature = 1)
//! ```

use std::io::{self, Read, Write};

use super::minhash::{MinhashParams, MinhashSignature};
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"TWMH";
const VERSION: u16 = 1;

pub struct SignatureShardWriter<W: Write> {
    sink: W,
    params: MinhashParams,
}

impl<W: Write> SignatureShardWriter<W> {
    pub fn new(mut sink: W, params: MinhashParams) -> Result<Self> {
        let mut header = Vec::with_capacity(30);
        header.extend_from_slice(MAGIC);
        header.extend_from_slice(&VERSION.to_le_bytes());
        for v in [
            params.shingle_size,
            params.num_permutations,
            params.num_bands,
            params.rows_per_band,
        ] {
            header.extend_from_slice(&(v as u32).to_le_bytes());
        }
        header.extend_from_slice(&params.hash_seed.to_le_bytes());
        sink.write_all(&header).map_err(Error::SinkWriteFailure)?;
        Ok(SignatureShardWriter { sink, params })
    }

    pub fn write(&mut self, id: &str, sig: Option<&MinhashSignature>) -> Result<()> {
        let mut rec = Vec::with_capacity(5 + id.len() + 8 * self.params.num_permutations);
        rec.extend_from_slice(&(id.len() as u32).to_le_bytes());
        rec.extend_from_slice(id.as_bytes());
        match sig {
            Some(sig) => {
                if sig.len() != self.params.num_permutations {
                    return Err(Error::InvalidShard(format!(
                        "signature of length {} in a shard of {}",
                        sig.len(),
                        self.params.num_permutations
                    )));
                }
                rec.push(1);
                for v in sig.values() {
                    rec.extend_from_slice(&v.to_le_bytes());
                }
            }
            None => rec.push(0),
        }
        self.sink.write_all(&rec).map_err(Error::SinkWriteFailure)
    }

    pub fn finish(mut self) -> Result<W> {
        self.sink.flush().map_err(Error::SinkWriteFailure)?;
        Ok(self.sink)
    }
}

pub fn write_signature_shard<'a, W, I>(sink: W, params: MinhashParams, entries: I) -> Result<W>
where
    W: Write,
    I: IntoIterator<Item = (&'a str, Option<&'a MinhashSignature>)>,
{
    let mut w = SignatureShardWriter::new(sink, params)?;
    for (id, sig) in entries {
        w.write(id, sig)?;
    }
    w.finish()
}

/// Iterates `(id, signature)` records after validating the header.
pub struct SignatureShardReader<R: Read> {
    source: R,
    params: MinhashParams,
    done: bool,
}

fn read_array<const N: usize, R: Read>(r: &mut R) -> io::Result<[u8; N]> {
    let mut buf = [0u8; N];
    r.read_exact(&mut buf)?;
    Ok(buf)
}

impl<R: Read> SignatureShardReader<R> {
    pub fn new(mut source: R) -> Result<Self> {
        let bad = |e: io::Error| Error::InvalidShard(format!("header: {e}"));
        let magic: [u8; 4] = read_array(&mut source).map_err(bad)?;
        if &magic != MAGIC {
            return Err(Error::InvalidShard("bad magic".into()));
        }
        let version = u16::from_le_bytes(read_array(&mut source).map_err(bad)?);
        if version != VERSION {
            return Err(Error::InvalidShard(format!("unsupported version {version}")));
        }
        let mut dims = [0usize; 4];
        for d in &mut dims {
            *d = u32::from_le_bytes(read_array(&mut source).map_err(bad)?) as usize;
        }
        let hash_seed = u64::from_le_bytes(read_array(&mut source).map_err(bad)?);
        let params = MinhashParams {
            shingle_size: dims[0],
            num_permutations: dims[1],
            num_bands: dims[2],
            rows_per_band: dims[3],
            hash_seed,
        };
        params.validate().map_err(Error::InvalidShard)?;
        Ok(SignatureShardReader {
            source,
            params,
            done: false,
        })
    }

    pub fn params(&self) -> &MinhashParams {
        &self.params
    }

    fn read_record(&mut self) -> Result<Option<(String, Option<MinhashSignature>)>> {
        let mut len = [0u8; 4];
        match self.source.read(&mut len[..1])? {
            0 => return Ok(None),
            _ => self.source.read_exact(&mut len[1..]).map_err(truncated)?,
        }
        let mut id = vec![0u8; u32::from_le_bytes(len) as usize];
        self.source.read_exact(&mut id).map_err(truncated)?;
        let id = String::from_utf8(id).map_err(|_| Error::InvalidShard("id is not UTF-8".into()))?;
        let [flag] = read_array::<1, _>(&mut self.source).map_err(truncated)?;
        let sig = match flag {
            0 => None,
            1 => {
                let mut values = Vec::with_capacity(self.params.num_permutations);
                for _ in 0..self.params.num_permutations {
                    values.push(u64::from_le_bytes(read_array(&mut self.source).map_err(truncated)?));
                }
                Some(MinhashSignature::from_values(values))
            }
            other => return Err(Error::InvalidShard(format!("bad signature flag {other}"))),
        };
        Ok(Some((id, sig)))
    }
}

fn truncated(e: io::Error) -> Error {
    Error::InvalidShard(format!("truncated record: {e}"))
}

impl<R: Read> Iterator for SignatureShardReader<R> {
    type Item = Result<(String, Option<MinhashSignature>)>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        match self.read_record() {
            Ok(Some(rec)) => Some(Ok(rec)),
            Ok(None) => {
                self.done = true;
                None
            }
            Err(e) => {
                self.done = true;
                Some(Err(e))
            }
        }
    }
}
