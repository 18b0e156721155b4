//! Stage orchestration, per-stage accounting and run configuration.

mod config;
mod run;
mod stage;
mod stats;

pub use config::{default_config_text, PipelineConfig, ENV_OUTPUT_DIR, ENV_WORKER_COUNT};
pub use run::{
    run_pipeline, run_single_stage, shard_file_name, shard_of, RunSummary, STAGES_DIR, STATS_JSON, STATS_TABLE,
};
pub use stage::{
    apply_stage, for_each_batch, minhash_dedup_file, prefilter_record, run_map_stage, run_prefilter, trim_file,
    Outcome, Stage, StageContext, Workers, BATCH_SIZE,
};
pub use stats::{
    global_kept_rate, kept_rate_product, relative_removal_rate, Anomalies, GlobalRates, Metric, StageStats,
    StatsReport, SCHEMA_VERSION,
};
