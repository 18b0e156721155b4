use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use twcurate::corpus_io::{read_documents_jsonl, write_documents_jsonl};
use twcurate::eval::{
    compare_stages, read_jsonl, sample_documents, score_responses, write_jsonl, PromptRecord, ResponseRecord,
    RubricTemplate, TTestVariant,
};
use twcurate::pipeline::{
    default_config_text, run_pipeline, run_single_stage, PipelineConfig, Stage, StageContext, StatsReport, Workers,
};
use twcurate::Error;

#[derive(Parser)]
#[command(
    name = "twcurate",
    version,
    about = "Traditional Chinese web-corpus curation pipeline"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run all eight stages over WARC archives.
    Run(ConfigArgs),
    /// Run one stage; prefilter reads WARC, every other stage reads JSONL.
    Stage {
        /// prefilter, extract, langid, gopher, c4, fineweb, minhash or trim
        name: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out")]
        output: PathBuf,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Render a stats.json report as a table and a kept-rate summary.
    Stats { file: PathBuf },
    /// Reservoir-sample documents from JSONL corpora.
    Sample {
        #[arg(long = "in", required = true, num_args = 1..)]
        inputs: Vec<PathBuf>,
        #[arg(short = 'n', long, default_value_t = 500)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long = "out")]
        output: PathBuf,
    },
    /// Render one rubric prompt per sampled document.
    Prompts {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out")]
        output: PathBuf,
        /// Replacement rubric template; the bundled one by default.
        #[arg(long)]
        template: Option<PathBuf>,
    },
    /// Parse scoring responses per stage and run pairwise t-tests.
    Compare {
        /// NAME=responses.jsonl, once per stage
        #[arg(long = "responses", required = true, value_parser = parse_named_path)]
        responses: Vec<(String, PathBuf)>,
        #[arg(long, value_enum, default_value_t = Variant::Welch)]
        variant: Variant,
        /// Write the report as JSON here as well.
        #[arg(long = "out")]
        output: Option<PathBuf>,
    },
    /// Print a configuration file listing every key with its default.
    Config,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Welch,
    Pooled,
}

/// Pipeline settings. Each flag overrides the config-file key of the same
/// name; `--set` reaches the remaining keys.
#[derive(Args, Default)]
struct ConfigArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// input_paths
    #[arg(long = "input", num_args = 1..)]
    input_paths: Vec<PathBuf>,
    /// output_dir
    #[arg(long = "output")]
    output_dir: Option<PathBuf>,
    /// blocklist_path
    #[arg(long = "blocklist")]
    blocklist_path: Option<PathBuf>,
    /// profile_paths: simplified,traditional,phrases
    #[arg(long = "profile")]
    profile_paths: Option<String>,
    /// scorer_model_path
    #[arg(long = "scorer-model")]
    scorer_model_path: Option<PathBuf>,
    #[arg(long = "stop-words")]
    stop_words_path: Option<PathBuf>,
    #[arg(long = "symbols")]
    symbols_path: Option<PathBuf>,
    #[arg(long = "policy-substrings")]
    policy_substrings_path: Option<PathBuf>,
    #[arg(long)]
    line_trim_threshold: Option<u64>,
    #[arg(long)]
    language: Option<String>,
    #[arg(long)]
    language_threshold: Option<f64>,
    #[arg(long)]
    max_simplified_fraction: Option<f64>,
    /// worker_count
    #[arg(long = "workers")]
    worker_count: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    shard_count: Option<usize>,
    #[arg(long)]
    persist_stages: bool,
    /// Any other config key, as KEY=VALUE.
    #[arg(long = "set", value_parser = parse_key_value)]
    set: Vec<(String, String)>,
}

fn parse_key_value(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .ok_or_else(|| format!("expected KEY=VALUE, got {s:?}"))
}

fn parse_named_path(s: &str) -> Result<(String, PathBuf), String> {
    parse_key_value(s).map(|(k, v)| (k, PathBuf::from(v)))
}

fn path_str(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

impl ConfigArgs {
    /// Defaults, then the config file, then the environment, then flags.
    fn build(&self) -> twcurate::Result<PipelineConfig> {
        let mut cfg = match &self.config {
            Some(p) => PipelineConfig::from_file(p)?,
            None => PipelineConfig::default(),
        };
        cfg.apply_env(|k| std::env::var(k).ok())?;

        let mut flags: Vec<(String, String)> = Vec::new();
        let mut flag = |k: &str, v: String| flags.push((k.to_string(), v));
        if !self.input_paths.is_empty() {
            let joined: Vec<String> = self.input_paths.iter().map(|p| path_str(p)).collect();
            flag("input_paths", joined.join(","));
        }
        let paths = [
            ("output_dir", &self.output_dir),
            ("blocklist_path", &self.blocklist_path),
            ("scorer_model_path", &self.scorer_model_path),
            ("stop_words_path", &self.stop_words_path),
            ("symbols_path", &self.symbols_path),
            ("policy_substrings_path", &self.policy_substrings_path),
        ];
        for (k, v) in paths {
            if let Some(p) = v {
                flag(k, path_str(p));
            }
        }
        if let Some(v) = &self.profile_paths {
            flag("profile_paths", v.clone());
        }
        if let Some(v) = self.line_trim_threshold {
            flag("line_trim_threshold", v.to_string());
        }
        if let Some(v) = &self.language {
            flag("language", v.clone());
        }
        if let Some(v) = self.language_threshold {
            flag("language_threshold", v.to_string());
        }
        if let Some(v) = self.max_simplified_fraction {
            flag("max_simplified_fraction", v.to_string());
        }
        if let Some(v) = self.worker_count {
            flag("worker_count", v.to_string());
        }
        if let Some(v) = self.seed {
            flag("seed", v.to_string());
        }
        if let Some(v) = self.shard_count {
            flag("shard_count", v.to_string());
        }
        if self.persist_stages {
            flag("persist_stages", "true".into());
        }
        flags.extend(self.set.iter().cloned());
        for (k, v) in flags {
            cfg.set(&k, &v, None).map_err(Error::ConfigInvalid)?;
        }
        Ok(cfg)
    }
}

/// A failure and where partial output may have been left.
struct Failure {
    error: Error,
    partial: Option<PathBuf>,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure { error, partial: None }
    }
}

trait PartialAt<T> {
    fn partial_at(self, p: &Path) -> Result<T, Failure>;
}

impl<T, E: Into<Failure>> PartialAt<T> for Result<T, E> {
    fn partial_at(self, p: &Path) -> Result<T, Failure> {
        self.map_err(|e| Failure {
            partial: Some(p.to_path_buf()),
            ..e.into()
        })
    }
}

fn is_config_error(e: &Error) -> bool {
    matches!(
        e,
        Error::ConfigInvalid(_) | Error::InvalidDataFile { .. } | Error::ScorerUnavailable(_)
    )
}

fn open(path: &Path) -> twcurate::Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::ConfigInvalid(format!("{}: {e}", path.display())))
}

fn create(path: &Path) -> twcurate::Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(Error::SinkWriteFailure)
}

fn cmd_run(args: &ConfigArgs) -> Result<(), Failure> {
    let cfg = args.build()?;
    cfg.validate()?;
    let out = cfg
        .output_dir
        .clone()
        .ok_or_else(|| Error::ConfigInvalid("an output directory is required (--output)".into()))?;
    if cfg.input_paths.is_empty() {
        log::warn!("no input archives given; writing an empty report");
    }
    let summary = run_pipeline(&cfg).partial_at(&out)?;
    println!("{}", summary.report.to_table());
    println!("{}", summary.report.to_summary());
    println!(
        "wrote {} shards and {}",
        summary.shards.len(),
        summary.stats_path.display()
    );
    Ok(())
}

fn cmd_stage(name: &str, input: &Path, output: &Path, args: &ConfigArgs) -> Result<(), Failure> {
    let stage: Stage = name.parse()?;
    let cfg = args.build()?;
    cfg.validate()?;
    if !input.exists() {
        return Err(Error::ConfigInvalid(format!("{} does not exist", input.display())).into());
    }
    let ctx = StageContext::from_config(&cfg)?;
    let workers = Workers::new(cfg.worker_count)?;
    let stats = run_single_stage(stage, input, output, &ctx, &workers).partial_at(output)?;
    let reasons: Vec<String> = stats.removal_reasons.iter().map(|(r, n)| format!("{r}={n}")).collect();
    println!(
        "{stage}: {} -> {} documents, {} -> {} bytes {}",
        stats.docs_in,
        stats.docs_out,
        stats.bytes_in,
        stats.bytes_out,
        reasons.join(" ")
    );
    Ok(())
}

fn cmd_stats(file: &Path) -> Result<(), Failure> {
    let text = std::fs::read_to_string(file).map_err(|e| Error::ConfigInvalid(format!("{}: {e}", file.display())))?;
    let report: StatsReport = serde_json::from_str(&text)
        .map_err(|e| Error::ConfigInvalid(format!("{}: not a stats report: {e}", file.display())))?;
    println!("{}", report.to_table());
    println!("{}", report.to_summary());
    Ok(())
}

fn cmd_sample(inputs: &[PathBuf], count: usize, seed: u64, output: &Path) -> Result<(), Failure> {
    let mut corpus: Box<dyn Read> = Box::new(io::empty());
    for p in inputs {
        corpus = Box::new(corpus.chain(open(p)?));
    }
    let docs = sample_documents(BufReader::new(corpus), count, seed)?;
    let mut sink = create(output)?;
    write_documents_jsonl(&docs, &mut sink).partial_at(output)?;
    sink.flush().map_err(Error::SinkWriteFailure).partial_at(output)?;
    println!("sampled {} documents into {}", docs.len(), output.display());
    Ok(())
}

fn cmd_prompts(input: &Path, output: &Path, template: Option<&Path>) -> Result<(), Failure> {
    let template = match template {
        Some(p) => RubricTemplate::load(p)?,
        None => RubricTemplate::default(),
    };
    let mut records = Vec::new();
    for doc in read_documents_jsonl(open(input)?) {
        let doc = doc?;
        records.push(PromptRecord {
            prompt: template.render(doc.text()),
            doc_id: doc.id,
        });
    }
    let mut sink = create(output)?;
    write_jsonl(&records, &mut sink).partial_at(output)?;
    sink.flush().map_err(Error::SinkWriteFailure).partial_at(output)?;
    println!("wrote {} prompts to {}", records.len(), output.display());
    Ok(())
}

fn cmd_compare(responses: &[(String, PathBuf)], variant: Variant, output: Option<&Path>) -> Result<(), Failure> {
    let variant = match variant {
        Variant::Welch => TTestVariant::Welch,
        Variant::Pooled => TTestVariant::Pooled,
    };
    let mut stages = Vec::new();
    for (name, path) in responses {
        let records: Vec<ResponseRecord> = read_jsonl(open(path)?)?;
        let summary = score_responses(&records);
        if !summary.unparsable.is_empty() {
            eprintln!("{name}: {} unparsable responses excluded", summary.unparsable.len());
        }
        stages.push((name.clone(), summary.cards));
    }
    let report = compare_stages(&stages, variant)?;
    println!("{}", report.to_table());
    if let Some(p) = output {
        let json = serde_json::to_string_pretty(&report).map_err(|e| Error::ConfigInvalid(e.to_string()))?;
        std::fs::write(p, json + "\n")
            .map_err(Error::SinkWriteFailure)
            .partial_at(p)?;
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run(args) => cmd_run(&args),
        Command::Stage {
            name,
            input,
            output,
            config,
        } => cmd_stage(&name, &input, &output, &config),
        Command::Stats { file } => cmd_stats(&file),
        Command::Sample {
            inputs,
            count,
            seed,
            output,
        } => cmd_sample(&inputs, count, seed, &output),
        Command::Prompts {
            input,
            output,
            template,
        } => cmd_prompts(&input, &output, template.as_deref()),
        Command::Compare {
            responses,
            variant,
            output,
        } => cmd_compare(&responses, variant, output.as_deref()),
        Command::Config => {
            print!("{}", default_config_text());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure { error, .. }) if is_config_error(&error) => {
            eprintln!("configuration error: {error}");
            ExitCode::from(1)
        }
        Err(Failure { error, partial }) => {
            eprintln!("error: {error}");
            if let Some(p) = partial {
                eprintln!("note: partial output may remain at {}", p.display());
            }
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_config_keys() {
        let args = ConfigArgs {
            worker_count: Some(3),
            set: vec![("min_words".into(), "80".into())],
            persist_stages: true,
            ..Default::default()
        };
        let cfg = args.build().unwrap();
        assert_eq!(cfg.worker_count, 3);
        assert_eq!(cfg.quality.min_words, 80);
        assert!(cfg.persist_stages);
    }

    #[test]
    fn unknown_set_key_is_config_error() {
        let args = ConfigArgs {
            set: vec![("nope".into(), "1".into())],
            ..Default::default()
        };
        assert!(matches!(args.build(), Err(Error::ConfigInvalid(_))));
    }

    #[test]
    fn key_value_parsing() {
        assert_eq!(parse_key_value("a = b").unwrap(), ("a".into(), "b".into()));
        assert!(parse_key_value("ab").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
