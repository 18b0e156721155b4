use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::datafile::load_entries;
use crate::dedup::{MinhashParams, DEFAULT_TRIM_THRESHOLD};
use crate::error::{Error, Result};
use crate::quality::{NewLineDenominator, QualityConfig};

pub const ENV_WORKER_COUNT: &str = "TWCURATE_WORKER_COUNT";
pub const ENV_OUTPUT_DIR: &str = "TWCURATE_OUTPUT_DIR";

/// Everything a run needs. Built from defaults, then a config file, then
/// environment overrides, then command-line flags.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub input_paths: Vec<PathBuf>,
    pub output_dir: Option<PathBuf>,
    pub blocklist_path: Option<PathBuf>,
    /// Simplified-only characters, Traditional-only characters, blocked phrases.
    pub profile_paths: Option<[PathBuf; 3]>,
    pub scorer_model_path: Option<PathBuf>,
    pub stop_words_path: Option<PathBuf>,
    pub symbols_path: Option<PathBuf>,
    pub policy_substrings_path: Option<PathBuf>,
    pub quality: QualityConfig,
    pub minhash: MinhashParams,
    pub line_trim_threshold: u64,
    pub language: String,
    pub language_threshold: f64,
    pub max_simplified_fraction: f64,
    pub worker_count: usize,
    /// Seeds the minhash permutations.
    pub seed: u64,
    pub shard_count: usize,
    pub persist_stages: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            input_paths: Vec::new(),
            output_dir: None,
            blocklist_path: None,
            profile_paths: None,
            scorer_model_path: None,
            stop_words_path: None,
            symbols_path: None,
            policy_substrings_path: None,
            quality: QualityConfig::default(),
            minhash: MinhashParams::default(),
            line_trim_threshold: DEFAULT_TRIM_THRESHOLD,
            language: "zh".into(),
            language_threshold: 0.65,
            max_simplified_fraction: 0.0,
            worker_count: std::thread::available_parallelism().map_or(1, |n| n.get()),
            seed: MinhashParams::default().hash_seed,
            shard_count: 4,
            persist_stages: false,
        }
    }
}

fn num<T: FromStr>(key: &str, value: &str) -> std::result::Result<T, String> {
    value.parse().map_err(|_| format!("{key}: cannot parse {value:?}"))
}

fn list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

impl PipelineConfig {
    /// Sets one field by its config-file key. Relative paths are resolved
    /// against `base` when given.
    pub fn set(&mut self, key: &str, value: &str, base: Option<&Path>) -> std::result::Result<(), String> {
        let value = value.trim();
        let path = |v: &str| -> PathBuf {
            let p = PathBuf::from(v);
            match base {
                Some(b) if p.is_relative() => b.join(p),
                _ => p,
            }
        };
        let opt_path = |v: &str| if v.is_empty() { None } else { Some(path(v)) };
        let q = &mut self.quality;
        match key {
            "input_paths" => self.input_paths = list(value).map(path).collect(),
            "output_dir" => self.output_dir = opt_path(value),
            "blocklist_path" => self.blocklist_path = opt_path(value),
            "profile_paths" => {
                let parts: Vec<PathBuf> = list(value).map(path).collect();
                self.profile_paths = match <[PathBuf; 3]>::try_from(parts) {
                    Ok(p) => Some(p),
                    Err(v) if v.is_empty() => None,
                    Err(_) => return Err("profile_paths: expected three comma-separated paths".into()),
                };
            }
            "scorer_model_path" => self.scorer_model_path = opt_path(value),
            "stop_words_path" => self.stop_words_path = opt_path(value),
            "symbols_path" => self.symbols_path = opt_path(value),
            "policy_substrings_path" => self.policy_substrings_path = opt_path(value),
            "min_words" => q.min_words = num(key, value)?,
            "max_words" => q.max_words = num(key, value)?,
            "max_symbol_word_ratio" => q.max_symbol_word_ratio = num(key, value)?,
            "max_ellipsis_line_ratio" => q.max_ellipsis_line_ratio = num(key, value)?,
            "max_bracket_ratio" => q.max_bracket_ratio = num(key, value)?,
            "min_line_punct_ratio" => q.min_line_punct_ratio = num(key, value)?,
            "short_line_char_threshold" => q.short_line_char_threshold = num(key, value)?,
            "max_short_line_ratio" => q.max_short_line_ratio = num(key, value)?,
            "max_char_dup_ratio" => q.max_char_dup_ratio = num(key, value)?,
            "max_new_line_ratio" => q.max_new_line_ratio = num(key, value)?,
            "new_line_denominator" => {
                q.new_line_denominator = match value {
                    "words" => NewLineDenominator::Words,
                    "codepoints" => NewLineDenominator::Codepoints,
                    _ => {
                        return Err(format!(
                            "new_line_denominator: expected words or codepoints, got {value:?}"
                        ))
                    }
                }
            }
            "terminal_punctuation" => q.terminal_punctuation = value.chars().filter(|c| !c.is_whitespace()).collect(),
            "shingle_size" => self.minhash.shingle_size = num(key, value)?,
            "num_permutations" => self.minhash.num_permutations = num(key, value)?,
            "num_bands" => self.minhash.num_bands = num(key, value)?,
            "rows_per_band" => self.minhash.rows_per_band = num(key, value)?,
            "line_trim_threshold" => self.line_trim_threshold = num(key, value)?,
            "language" => self.language = value.to_string(),
            "language_threshold" => self.language_threshold = num(key, value)?,
            "max_simplified_fraction" => self.max_simplified_fraction = num(key, value)?,
            "worker_count" => self.worker_count = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "shard_count" => self.shard_count = num(key, value)?,
            "persist_stages" => self.persist_stages = num(key, value)?,
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }

    /// Applies `key = value` lines; `#` starts a comment line.
    pub fn apply_text(&mut self, text: &str, base: Option<&Path>) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::ConfigInvalid(format!("line {}: expected key = value", i + 1)))?;
            self.set(key.trim(), value, base)
                .map_err(|e| Error::ConfigInvalid(format!("line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::ConfigInvalid(format!("{}: {e}", path.display())))?;
        let mut cfg = PipelineConfig::default();
        cfg.apply_text(&text, path.parent())?;
        Ok(cfg)
    }

    /// Honors the worker-count and output-dir environment overrides.
    pub fn apply_env<F: Fn(&str) -> Option<String>>(&mut self, var: F) -> Result<()> {
        for key in [ENV_WORKER_COUNT, ENV_OUTPUT_DIR] {
            if let Some(v) = var(key) {
                let field = if key == ENV_WORKER_COUNT {
                    "worker_count"
                } else {
                    "output_dir"
                };
                self.set(field, &v, None)
                    .map_err(|e| Error::ConfigInvalid(format!("{key}: {e}")))?;
            }
        }
        Ok(())
    }

    /// Minhash parameters with the run seed applied.
    pub fn minhash_params(&self) -> MinhashParams {
        MinhashParams {
            hash_seed: self.seed,
            ..self.minhash
        }
    }

    /// Checks values and that every referenced path exists, without
    /// touching the filesystem otherwise.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::ConfigInvalid(m));
        if self.worker_count == 0 {
            return bad("worker_count must be at least 1".into());
        }
        if self.shard_count == 0 {
            return bad("shard_count must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.language_threshold) {
            return bad(format!(
                "language_threshold must lie in [0, 1] (got {})",
                self.language_threshold
            ));
        }
        if !(0.0..=1.0).contains(&self.max_simplified_fraction) {
            return bad("max_simplified_fraction must lie in [0, 1]".into());
        }
        self.quality.validate().map_err(Error::ConfigInvalid)?;
        self.minhash_params().validate().map_err(Error::ConfigInvalid)?;
        let mut paths: Vec<(&str, &Path)> = self.input_paths.iter().map(|p| ("input", p.as_path())).collect();
        for (name, p) in [
            ("blocklist_path", &self.blocklist_path),
            ("scorer_model_path", &self.scorer_model_path),
            ("stop_words_path", &self.stop_words_path),
            ("symbols_path", &self.symbols_path),
            ("policy_substrings_path", &self.policy_substrings_path),
        ] {
            if let Some(p) = p {
                paths.push((name, p));
            }
        }
        if let Some(ps) = &self.profile_paths {
            paths.extend(ps.iter().map(|p| ("profile_paths", p.as_path())));
        }
        for (name, p) in paths {
            if !p.exists() {
                return bad(format!("{name}: {} does not exist", p.display()));
            }
        }
        Ok(())
    }

    /// Quality thresholds with any word-list files loaded.
    pub fn load_quality(&self) -> Result<QualityConfig> {
        let mut q = self.quality.clone();
        if let Some(p) = &self.stop_words_path {
            q.stop_words = load_entries(p)?;
        }
        if let Some(p) = &self.symbols_path {
            q.symbols = load_entries(p)?;
        }
        if let Some(p) = &self.policy_substrings_path {
            q.policy_substrings = load_entries(p)?;
        }
        q.validate().map_err(Error::ConfigInvalid)?;
        Ok(q)
    }
}

/// A commented config file listing every key with its default.
pub fn default_config_text() -> String {
    let d = PipelineConfig::default();
    let q = &d.quality;
    let m = &d.minhash;
    format!(
        "# twcurate pipeline configuration. Lists are comma-separated; relative\n\
         # paths resolve against this file's directory.\n\
         input_paths =\n\
         output_dir =\n\
         # host:, suffix: and sub: entries, one per line\n\
         blocklist_path =\n\
         # simplified chars, traditional chars, blocked phrases (bundled when empty)\n\
         profile_paths =\n\
         # n-gram model TSV; the script heuristic is used when empty\n\
         scorer_model_path =\n\
         stop_words_path =\n\
         symbols_path =\n\
         policy_substrings_path =\n\
         language = {}\n\
         language_threshold = {}\n\
         max_simplified_fraction = {}\n\
         min_words = {}\n\
         max_words = {}\n\
         max_symbol_word_ratio = {}\n\
         max_ellipsis_line_ratio = {}\n\
         max_bracket_ratio = {}\n\
         min_line_punct_ratio = {}\n\
         short_line_char_threshold = {}\n\
         max_short_line_ratio = {}\n\
         max_char_dup_ratio = {}\n\
         max_new_line_ratio = {}\n\
         # words or codepoints\n\
         new_line_denominator = words\n\
         shingle_size = {}\n\
         num_permutations = {}\n\
         num_bands = {}\n\
         rows_per_band = {}\n\
         line_trim_threshold = {}\n\
         # defaults to the number of CPUs; env {ENV_WORKER_COUNT}\n\
         worker_count = 1\n\
         seed = {}\n\
         shard_count = {}\n\
         persist_stages = false\n",
        d.language,
        d.language_threshold,
        d.max_simplified_fraction,
        q.min_words,
        q.max_words,
        q.max_symbol_word_ratio,
        q.max_ellipsis_line_ratio,
        q.max_bracket_ratio,
        q.min_line_punct_ratio,
        q.short_line_char_threshold,
        q.max_short_line_ratio,
        q.max_char_dup_ratio,
        q.max_new_line_ratio,
        m.shingle_size,
        m.num_permutations,
        m.num_bands,
        m.rows_per_band,
        d.line_trim_threshold,
        d.seed,
        d.shard_count,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_file_text() {
        let mut cfg = PipelineConfig::default();
        cfg.apply_text(
            "# comment\ninput_paths = a.warc.gz, b.warc.gz\noutput_dir=out\nmin_words = 30\n\
             new_line_denominator = codepoints\nseed = 9\npersist_stages = true\n",
            Some(Path::new("/base")),
        )
        .unwrap();
        assert_eq!(
            cfg.input_paths,
            [PathBuf::from("/base/a.warc.gz"), PathBuf::from("/base/b.warc.gz")]
        );
        assert_eq!(cfg.output_dir, Some(PathBuf::from("/base/out")));
        assert_eq!(cfg.quality.min_words, 30);
        assert_eq!(cfg.quality.new_line_denominator, NewLineDenominator::Codepoints);
        assert_eq!(cfg.minhash_params().hash_seed, 9);
        assert!(cfg.persist_stages);
    }

    #[test]
    fn rejects_bad_lines() {
        let mut cfg = PipelineConfig::default();
        assert!(cfg.apply_text("nonsense", None).is_err());
        assert!(cfg.apply_text("bogus_key = 1", None).is_err());
        assert!(cfg.apply_text("min_words = many", None).is_err());
        assert!(cfg.apply_text("profile_paths = a, b", None).is_err());
    }

    #[test]
    fn env_overrides() {
        let mut cfg = PipelineConfig::default();
        cfg.apply_env(|k| match k {
            ENV_WORKER_COUNT => Some("3".into()),
            ENV_OUTPUT_DIR => Some("/tmp/x".into()),
            _ => None,
        })
        .unwrap();
        assert_eq!(cfg.worker_count, 3);
        assert_eq!(cfg.output_dir, Some(PathBuf::from("/tmp/x")));
        assert!(cfg.apply_env(|_| Some("zero".into())).is_err());
    }

    #[test]
    fn validation() {
        PipelineConfig::default().validate().unwrap();
        let cfg = PipelineConfig {
            worker_count: 0,
            ..Default::default()
        };
        assert!(matches!(cfg.validate(), Err(Error::ConfigInvalid(_))));
        let cfg = PipelineConfig {
            blocklist_path: Some("/nonexistent/blocklist.txt".into()),
            ..Default::default()
        };
        assert!(cfg.validate().unwrap_err().to_string().contains("blocklist_path"));
        let mut cfg = PipelineConfig::default();
        cfg.minhash.num_bands = 13;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn default_text_round_trips() {
        let mut cfg = PipelineConfig::default();
        cfg.apply_text(&default_config_text(), None).unwrap();
        assert_eq!(
            cfg,
            PipelineConfig {
                worker_count: 1,
                ..Default::default()
            }
        );
    }
}
