use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use super::config::PipelineConfig;
use super::stats::{Metric, StageStats};
use crate::corpus_io::{read_documents_jsonl, write_documents_jsonl, Document, RawRecord};
use crate::dedup::{
    cluster_and_select, lsh_bucket_keys, signature_for_text, trim_frequent_lines, LineFrequencyTable, MinhashParams,
    SignatureShardReader, SignatureShardWriter, DEFAULT_TRIM_THRESHOLD,
};
use crate::error::{Error, Result};
use crate::langid::{
    identify, LangIdConfig, LanguageScorer, NgramModelScorer, ScorerFactory, ScriptProfile, ScriptScorer,
};
use crate::prefilter::{
    decode_payload, extract_main_text, has_fuzzy_cjk_run, url_blocked, UrlBlocklist, DEFAULT_MIN_RUN,
};
use crate::quality::{c4_document_filter, fineweb_filter, gopher_filter, QualityConfig};
use crate::verdict::Reason;

/// Documents read from or written to disk per parallel batch.
pub const BATCH_SIZE: usize = 4096;

/// The eight pipeline stages, in execution order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    Prefilter,
    Extract,
    Langid,
    Gopher,
    C4,
    Fineweb,
    Minhash,
    Trim,
}

impl Stage {
    pub const ALL: [Stage; 8] = [
        Stage::Prefilter,
        Stage::Extract,
        Stage::Langid,
        Stage::Gopher,
        Stage::C4,
        Stage::Fineweb,
        Stage::Minhash,
        Stage::Trim,
    ];

    /// Stages that look at one document at a time after extraction input.
    pub const MAP: [Stage; 5] = [Stage::Extract, Stage::Langid, Stage::Gopher, Stage::C4, Stage::Fineweb];

    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Prefilter => "prefilter",
            Stage::Extract => "extract",
            Stage::Langid => "langid",
            Stage::Gopher => "gopher",
            Stage::C4 => "c4",
            Stage::Fineweb => "fineweb",
            Stage::Minhash => "minhash",
            Stage::Trim => "trim",
        }
    }

    /// 1-based position in the pipeline.
    pub fn number(self) -> usize {
        Stage::ALL.iter().position(|&s| s == self).unwrap_or(0) + 1
    }

    /// Documents through language identification, bytes afterwards.
    pub fn governing_metric(self) -> Metric {
        if self.number() <= 3 {
            Metric::Documents
        } else {
            Metric::Bytes
        }
    }

    /// File name used when the stage's output is persisted.
    pub fn file_name(self) -> String {
        format!("{:02}-{}.jsonl", self.number(), self.as_str())
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Stage::ALL
            .into_iter()
            .find(|st| st.as_str() == s)
            .ok_or_else(|| Error::ConfigInvalid(format!("unknown stage {s:?}")))
    }
}

/// Immutable data shared by all workers.
#[derive(Clone)]
pub struct StageContext {
    pub blocklist: UrlBlocklist,
    pub profile: ScriptProfile,
    pub langid: LangIdConfig,
    pub quality: QualityConfig,
    pub minhash: MinhashParams,
    pub line_trim_threshold: u64,
    pub scorers: Arc<dyn ScorerFactory>,
}

impl Default for StageContext {
    fn default() -> Self {
        StageContext {
            blocklist: UrlBlocklist::default(),
            profile: ScriptProfile::default(),
            langid: LangIdConfig::default(),
            quality: QualityConfig::default(),
            minhash: MinhashParams::default(),
            line_trim_threshold: DEFAULT_TRIM_THRESHOLD,
            scorers: Arc::new(|| Box::new(ScriptScorer) as Box<dyn LanguageScorer>),
        }
    }
}

impl StageContext {
    /// Loads every data file the configuration refers to.
    pub fn from_config(cfg: &PipelineConfig) -> Result<Self> {
        let blocklist = match &cfg.blocklist_path {
            Some(p) => UrlBlocklist::load(p)?,
            None => UrlBlocklist::default(),
        };
        let profile = match &cfg.profile_paths {
            Some([s, t, p]) => ScriptProfile::load(s, t, p)?,
            None => ScriptProfile::default(),
        };
        let scorers: Arc<dyn ScorerFactory> = match &cfg.scorer_model_path {
            Some(p) => {
                let model = NgramModelScorer::load(p)?;
                Arc::new(move || Box::new(model.clone()) as Box<dyn LanguageScorer>)
            }
            None => Arc::new(|| Box::new(ScriptScorer) as Box<dyn LanguageScorer>),
        };
        Ok(StageContext {
            blocklist,
            profile,
            langid: LangIdConfig {
                language: cfg.language.clone(),
                threshold: cfg.language_threshold,
                max_simplified_fraction: cfg.max_simplified_fraction,
            },
            quality: cfg.load_quality()?,
            minhash: cfg.minhash_params(),
            line_trim_threshold: cfg.line_trim_threshold,
            scorers,
        })
    }
}

/// Result of passing one document through one stage. `doc` is present
/// exactly when the document was kept.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub bytes_in: usize,
    pub removed: Option<Reason>,
    pub doc: Option<Document>,
}

impl Outcome {
    fn kept(bytes_in: usize, doc: Document) -> Self {
        Outcome {
            bytes_in,
            removed: None,
            doc: Some(doc),
        }
    }

    fn removed(bytes_in: usize, reason: Reason) -> Self {
        Outcome {
            bytes_in,
            removed: Some(reason),
            doc: None,
        }
    }
}

/// URL blocklist, then the CJK-run test on the decoded payload. A kept
/// document carries the decoded HTML as its text.
pub fn prefilter_record(record: &RawRecord, blocklist: &UrlBlocklist) -> Outcome {
    let bytes_in = record.payload.len();
    if url_blocked(&record.target_url, blocklist) {
        return Outcome::removed(bytes_in, Reason::UrlBlocked);
    }
    let html = decode_payload(&record.payload, &record.content_type);
    if !has_fuzzy_cjk_run(&html, DEFAULT_MIN_RUN) {
        return Outcome::removed(bytes_in, Reason::NoCjkRun);
    }
    Outcome::kept(bytes_in, Document::from_record(record, html))
}

/// Runs one per-document stage (one of [`Stage::MAP`]).
pub fn apply_stage(
    stage: Stage,
    mut doc: Document,
    scorer: &mut dyn LanguageScorer,
    ctx: &StageContext,
) -> Result<Outcome> {
    let bytes_in = doc.byte_len();
    let verdict = match stage {
        Stage::Extract => {
            let text = extract_main_text(doc.text());
            doc.set_text(text);
            return Ok(Outcome::kept(bytes_in, doc));
        }
        Stage::Langid => identify(&mut doc, scorer, &ctx.profile, &ctx.langid),
        Stage::Gopher => gopher_filter(&doc, &ctx.quality),
        Stage::C4 => {
            let (verdict, text) = c4_document_filter(&doc, &ctx.quality);
            doc.set_text(text);
            verdict
        }
        Stage::Fineweb => fineweb_filter(&doc, &ctx.quality),
        other => return Err(Error::ConfigInvalid(format!("{other} is not a per-document stage"))),
    };
    Ok(if verdict.keep {
        Outcome::kept(bytes_in, doc)
    } else {
        Outcome::removed(bytes_in, verdict.reason)
    })
}

/// A fixed-size worker pool.
pub struct Workers {
    pool: rayon::ThreadPool,
}

impl Workers {
    pub fn new(count: usize) -> Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(count.max(1))
            .build()
            .map_err(|e| Error::ConfigInvalid(format!("worker pool: {e}")))?;
        Ok(Workers { pool })
    }

    pub fn install<T: Send>(&self, f: impl FnOnce() -> T + Send) -> T {
        self.pool.install(f)
    }
}

fn tally(outcomes: Vec<Outcome>, stats: &mut StageStats) -> Vec<Document> {
    let mut kept = Vec::with_capacity(outcomes.len());
    for o in outcomes {
        let bytes_out = o.doc.as_ref().map_or(0, Document::byte_len);
        stats.record(o.bytes_in, o.removed, bytes_out);
        kept.extend(o.doc);
    }
    kept
}

/// Prefilters a batch of records in parallel. Bytes are raw payload bytes
/// on both sides.
pub fn run_prefilter(
    records: &[RawRecord],
    ctx: &StageContext,
    workers: &Workers,
    stats: &mut StageStats,
) -> Vec<Document> {
    let outcomes: Vec<(usize, Outcome)> = workers.install(|| {
        records
            .par_iter()
            .map(|r| (r.payload.len(), prefilter_record(r, &ctx.blocklist)))
            .collect()
    });
    let mut kept = Vec::new();
    for (payload, o) in outcomes {
        stats.record(o.bytes_in, o.removed, payload);
        kept.extend(o.doc);
    }
    kept
}

/// Runs a per-document stage over a batch in parallel, preserving order.
/// Each worker split gets its own scorer.
pub fn run_map_stage(
    stage: Stage,
    docs: Vec<Document>,
    ctx: &StageContext,
    workers: &Workers,
    stats: &mut StageStats,
) -> Result<Vec<Document>> {
    let outcomes: Result<Vec<Outcome>> = workers.install(|| {
        docs.into_par_iter()
            .map_init(
                || ctx.scorers.make(),
                |scorer, doc| apply_stage(stage, doc, scorer.as_mut(), ctx),
            )
            .collect()
    });
    Ok(tally(outcomes?, stats))
}

/// Calls `f` on successive batches of a JSONL file.
pub fn for_each_batch<F>(path: &Path, mut f: F) -> Result<()>
where
    F: FnMut(Vec<Document>) -> Result<()>,
{
    let mut reader = read_documents_jsonl(BufReader::new(File::open(path)?));
    loop {
        let batch = reader.by_ref().take(BATCH_SIZE).collect::<Result<Vec<_>>>()?;
        if batch.is_empty() {
            return Ok(());
        }
        f(batch)?;
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(Error::SinkWriteFailure)?))
}

/// Near-duplicate removal over a whole JSONL file. Signatures are computed
/// in parallel and persisted to `signatures`, clustering runs on one
/// thread, and each cluster keeps its smallest id. A repeated id is always
/// a duplicate of its first occurrence.
pub fn minhash_dedup_file(
    input: &Path,
    output: &Path,
    signatures: &Path,
    ctx: &StageContext,
    workers: &Workers,
) -> Result<StageStats> {
    let params = ctx.minhash;
    let mut shard = SignatureShardWriter::new(create(signatures)?, params)?;
    for_each_batch(input, |batch| {
        let sigs: Vec<_> = workers.install(|| {
            batch
                .par_iter()
                .map(|d| signature_for_text(d.text(), &params))
                .collect()
        });
        for (doc, sig) in batch.iter().zip(&sigs) {
            shard.write(&doc.id, sig.as_ref())?;
        }
        Ok(())
    })?;
    shard.finish()?.flush().map_err(Error::SinkWriteFailure)?;

    let reader = SignatureShardReader::new(BufReader::new(File::open(signatures)?))?;
    let mut candidates = Vec::new();
    for rec in reader {
        let (id, sig) = rec?;
        let keys = sig.map(|s| lsh_bucket_keys(&s, &params)).unwrap_or_default();
        candidates.push((id, keys));
    }
    let duplicates = cluster_and_select(candidates);

    let mut stats = StageStats::new(Stage::Minhash);
    let mut seen = HashSet::new();
    let mut sink = create(output)?;
    for_each_batch(input, |batch| {
        let mut kept = Vec::with_capacity(batch.len());
        for doc in batch {
            if duplicates.contains(&doc.id) || !seen.insert(doc.id.clone()) {
                stats.record(doc.byte_len(), Some(Reason::Duplicate), 0);
            } else {
                stats.record(doc.byte_len(), None, doc.byte_len());
                kept.push(doc);
            }
        }
        write_documents_jsonl(&kept, &mut sink)?;
        Ok(())
    })?;
    sink.flush().map_err(Error::SinkWriteFailure)?;
    Ok(stats)
}

/// Builds the line-frequency table over the whole file, merging per-batch
/// tables, then strips hot leading and trailing lines from every document.
/// Documents left blank are removed.
pub fn trim_file<F>(input: &Path, ctx: &StageContext, workers: &Workers, mut sink: F) -> Result<StageStats>
where
    F: FnMut(Document) -> Result<()>,
{
    let mut table = LineFrequencyTable::new();
    for_each_batch(input, |batch| {
        let part = workers.install(|| {
            batch
                .par_iter()
                .fold(LineFrequencyTable::new, |mut t, d| {
                    t.add_document(d);
                    t
                })
                .reduce(LineFrequencyTable::new, |mut a, b| {
                    a.merge(b);
                    a
                })
        });
        table.merge(part);
        Ok(())
    })?;

    let threshold = ctx.line_trim_threshold;
    let mut stats = StageStats::new(Stage::Trim);
    for_each_batch(input, |batch| {
        let trimmed: Vec<Document> = workers.install(|| {
            batch
                .par_iter()
                .map(|d| trim_frequent_lines(d, &table, threshold))
                .collect()
        });
        for (before, after) in batch.iter().zip(trimmed) {
            if after.text().trim().is_empty() {
                stats.record(before.byte_len(), Some(Reason::EmptyAfterTrim), 0);
            } else {
                stats.record(before.byte_len(), None, after.byte_len());
                sink(after)?;
            }
        }
        Ok(())
    })?;
    Ok(stats)
}
