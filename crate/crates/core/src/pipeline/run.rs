use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use xxhash_rust::xxh3::xxh3_64;

use super::config::PipelineConfig;
use super::stage::{
    minhash_dedup_file, run_map_stage, run_prefilter, trim_file, Stage, StageContext, Workers, BATCH_SIZE,
};
use super::stats::{Anomalies, StageStats, StatsReport};
use crate::corpus_io::{read_warc_records, write_documents_jsonl, Document};
use crate::error::{Error, Result};

pub const STATS_JSON: &str = "stats.json";
pub const STATS_TABLE: &str = "stats.txt";
pub const STAGES_DIR: &str = "stages";
const SIGNATURES: &str = "signatures.bin";

/// Output shard for a document id; independent of processing order.
pub fn shard_of(id: &str, shard_count: usize) -> usize {
    (xxh3_64(id.as_bytes()) % shard_count.max(1) as u64) as usize
}

pub fn shard_file_name(index: usize) -> String {
    format!("part-{index:05}.jsonl")
}

/// What a finished run produced.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub report: StatsReport,
    pub shards: Vec<PathBuf>,
    pub stats_path: PathBuf,
}

struct StageSinks {
    dir: PathBuf,
    persist: bool,
    writers: Vec<(Stage, BufWriter<File>)>,
}

impl StageSinks {
    fn open(dir: &Path, persist: bool) -> Result<Self> {
        let mut writers = Vec::new();
        for stage in &Stage::ALL[..6] {
            if persist || *stage == Stage::Fineweb {
                let f = File::create(dir.join(stage.file_name())).map_err(Error::SinkWriteFailure)?;
                writers.push((*stage, BufWriter::new(f)));
            }
        }
        Ok(StageSinks {
            dir: dir.to_path_buf(),
            persist,
            writers,
        })
    }

    fn write(&mut self, stage: Stage, docs: &[Document]) -> Result<()> {
        if let Some((_, w)) = self.writers.iter_mut().find(|(s, _)| *s == stage) {
            write_documents_jsonl(docs, w)?;
        }
        Ok(())
    }

    fn finish(self) -> Result<()> {
        for (_, mut w) in self.writers {
            w.flush().map_err(Error::SinkWriteFailure)?;
        }
        Ok(())
    }

    fn path(&self, stage: Stage) -> PathBuf {
        self.dir.join(stage.file_name())
    }
}

/// Runs stages 1 to 6 over every archive, streaming in batches, and
/// appends survivors to the stage-6 file.
fn map_phase(
    cfg: &PipelineConfig,
    ctx: &StageContext,
    workers: &Workers,
    sinks: &mut StageSinks,
    stats: &mut [StageStats],
    anomalies: &mut Anomalies,
) -> Result<()> {
    for path in &cfg.input_paths {
        let name = path
            .file_name()
            .map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
        let file = match File::open(path) {
            Ok(f) => f,
            Err(e) => {
                log::warn!("cannot open {}: {e}", path.display());
                anomalies.failed_archives.push(name);
                continue;
            }
        };
        let mut reader = read_warc_records(BufReader::new(file));
        let mut failed = false;
        loop {
            let mut records = Vec::with_capacity(BATCH_SIZE);
            while records.len() < BATCH_SIZE {
                match reader.next() {
                    Some(Ok(r)) => records.push(r),
                    Some(Err(e)) => {
                        log::warn!("{}: {e}; keeping the records read so far", path.display());
                        failed = true;
                        break;
                    }
                    None => break,
                }
            }
            let last = failed || records.len() < BATCH_SIZE;
            let mut docs = run_prefilter(&records, ctx, workers, &mut stats[0]);
            sinks.write(Stage::Prefilter, &docs)?;
            for stage in Stage::MAP {
                docs = run_map_stage(stage, docs, ctx, workers, &mut stats[stage.number() - 1])?;
                sinks.write(stage, &docs)?;
            }
            if last {
                break;
            }
        }
        anomalies.corrupt_records += reader.corrupt_records();
        anomalies.non_response_records += reader.skipped_records();
        if failed {
            anomalies.failed_archives.push(name);
        }
    }
    Ok(())
}

/// Validates the configuration, then runs all eight stages. Survivors are
/// written to `shard_count` JSONL shards sorted by id, and the report to
/// `stats.json` and `stats.txt`. Nothing is created when validation fails.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<RunSummary> {
    cfg.validate()?;
    let out = cfg
        .output_dir
        .clone()
        .ok_or_else(|| Error::ConfigInvalid("output_dir is required".into()))?;
    let ctx = StageContext::from_config(cfg)?;
    let workers = Workers::new(cfg.worker_count)?;

    let stages_dir = out.join(STAGES_DIR);
    fs::create_dir_all(&stages_dir).map_err(Error::SinkWriteFailure)?;
    let mut stats: Vec<StageStats> = Stage::ALL.iter().map(|&s| StageStats::new(s)).collect();
    let mut anomalies = Anomalies::default();

    let mut sinks = StageSinks::open(&stages_dir, cfg.persist_stages)?;
    map_phase(cfg, &ctx, &workers, &mut sinks, &mut stats, &mut anomalies)?;
    let fineweb_out = sinks.path(Stage::Fineweb);
    let minhash_out = sinks.path(Stage::Minhash);
    let persist = sinks.persist;
    sinks.finish()?;

    stats[6] = minhash_dedup_file(&fineweb_out, &minhash_out, &stages_dir.join(SIGNATURES), &ctx, &workers)?;

    let mut buckets: Vec<Vec<Document>> = vec![Vec::new(); cfg.shard_count];
    let mut trim_sink = if persist {
        Some(BufWriter::new(
            File::create(stages_dir.join(Stage::Trim.file_name())).map_err(Error::SinkWriteFailure)?,
        ))
    } else {
        None
    };
    stats[7] = trim_file(&minhash_out, &ctx, &workers, |doc| {
        if let Some(w) = trim_sink.as_mut() {
            write_documents_jsonl([&doc], w)?;
        }
        buckets[shard_of(&doc.id, cfg.shard_count)].push(doc);
        Ok(())
    })?;
    if let Some(mut w) = trim_sink {
        w.flush().map_err(Error::SinkWriteFailure)?;
    }

    let mut shards = Vec::with_capacity(cfg.shard_count);
    for (i, mut docs) in buckets.into_iter().enumerate() {
        docs.sort_by(|a, b| a.id.cmp(&b.id));
        let path = out.join(shard_file_name(i));
        let mut w = BufWriter::new(File::create(&path).map_err(Error::SinkWriteFailure)?);
        write_documents_jsonl(&docs, &mut w)?;
        shards.push(path);
    }

    let report = StatsReport::new(stats, anomalies);
    let stats_path = out.join(STATS_JSON);
    fs::write(&stats_path, report.to_json()).map_err(Error::SinkWriteFailure)?;
    fs::write(
        out.join(STATS_TABLE),
        format!("{}\n{}", report.to_table(), report.to_summary()),
    )
    .map_err(Error::SinkWriteFailure)?;
    if !persist {
        fs::remove_dir_all(&stages_dir)?;
    }
    Ok(RunSummary {
        report,
        shards,
        stats_path,
    })
}

/// Runs one stage from `input` to `output`. The prefilter stage reads a
/// WARC archive; every other stage reads JSONL. Output keeps input order.
pub fn run_single_stage(
    stage: Stage,
    input: &Path,
    output: &Path,
    ctx: &StageContext,
    workers: &Workers,
) -> Result<StageStats> {
    let mut stats = StageStats::new(stage);
    let mut sink = BufWriter::new(File::create(output).map_err(Error::SinkWriteFailure)?);
    match stage {
        Stage::Prefilter => {
            let mut reader = read_warc_records(BufReader::new(File::open(input)?));
            loop {
                let records = reader.by_ref().take(BATCH_SIZE).collect::<Result<Vec<_>>>()?;
                if records.is_empty() {
                    break;
                }
                let docs = run_prefilter(&records, ctx, workers, &mut stats);
                write_documents_jsonl(&docs, &mut sink)?;
            }
        }
        Stage::Minhash => {
            let sig_path = output.with_extension("signatures.bin");
            drop(sink);
            stats = minhash_dedup_file(input, output, &sig_path, ctx, workers)?;
            fs::remove_file(&sig_path)?;
            return Ok(stats);
        }
        Stage::Trim => {
            stats = trim_file(input, ctx, workers, |doc| {
                write_documents_jsonl([&doc], &mut sink).map(|_| ())
            })?;
        }
        _ => {
            super::stage::for_each_batch(input, |batch| {
                let docs = run_map_stage(stage, batch, ctx, workers, &mut stats)?;
                write_documents_jsonl(&docs, &mut sink)?;
                Ok(())
            })?;
        }
    }
    sink.flush().map_err(Error::SinkWriteFailure)?;
    Ok(stats)
}
