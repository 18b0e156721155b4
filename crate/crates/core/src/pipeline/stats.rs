use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::stage::Stage;
use crate::verdict::Reason;

pub const SCHEMA_VERSION: u32 = 1;

/// Which quantity a stage's rates are measured in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Documents,
    Bytes,
}

/// Per-stage counts. Bytes are UTF-8 bytes of document text, except on the
/// input side of the first stage, which counts raw payload bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageStats {
    pub stage_name: String,
    pub governing_metric: Metric,
    pub docs_in: u64,
    pub docs_out: u64,
    pub bytes_in: u64,
    pub bytes_out: u64,
    pub removal_reasons: BTreeMap<Reason, u64>,
}

impl StageStats {
    pub fn new(stage: Stage) -> Self {
        StageStats {
            stage_name: stage.as_str().to_string(),
            governing_metric: stage.governing_metric(),
            docs_in: 0,
            docs_out: 0,
            bytes_in: 0,
            bytes_out: 0,
            removal_reasons: BTreeMap::new(),
        }
    }

    /// Tallies one document: `removed` is `None` when it was kept.
    pub fn record(&mut self, bytes_in: usize, removed: Option<Reason>, bytes_out: usize) {
        self.docs_in += 1;
        self.bytes_in += bytes_in as u64;
        match removed {
            None => {
                self.docs_out += 1;
                self.bytes_out += bytes_out as u64;
            }
            Some(reason) => *self.removal_reasons.entry(reason).or_default() += 1,
        }
    }

    pub fn merge(&mut self, other: &StageStats) {
        self.docs_in += other.docs_in;
        self.docs_out += other.docs_out;
        self.bytes_in += other.bytes_in;
        self.bytes_out += other.bytes_out;
        for (reason, n) in &other.removal_reasons {
            *self.removal_reasons.entry(*reason).or_default() += n;
        }
    }

    /// `(in, out)` in the governing metric.
    pub fn governing_counts(&self) -> (u64, u64) {
        match self.governing_metric {
            Metric::Documents => (self.docs_in, self.docs_out),
            Metric::Bytes => (self.bytes_in, self.bytes_out),
        }
    }

    pub fn zero_input(&self) -> bool {
        self.governing_counts().0 == 0
    }

    pub fn removed(&self) -> u64 {
        self.removal_reasons.values().sum()
    }
}

/// `1 - out/in` in the stage's governing metric; 0.0 on zero input (see
/// [`StageStats::zero_input`]).
pub fn relative_removal_rate(stats: &StageStats) -> f64 {
    let (i, o) = stats.governing_counts();
    if i == 0 {
        0.0
    } else {
        1.0 - o as f64 / i as f64
    }
}

/// Kept rates of the document chain (all stages) and the byte chain
/// (byte-governed stages).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlobalRates {
    pub doc_kept_rate: f64,
    pub byte_kept_rate: f64,
}

/// Product of per-stage `out/in` factors; a zero-input stage contributes 1.
/// Computed exactly, so a telescoping chain equals `final/initial` exactly.
pub fn kept_rate_product<I: IntoIterator<Item = (u64, u64)>>(factors: I) -> f64 {
    let mut exact = Some(Ratio::from_integer(1u128));
    let mut approx = 1.0f64;
    for (i, o) in factors {
        if i == 0 {
            continue;
        }
        approx *= o as f64 / i as f64;
        let factor = Ratio::new(u128::from(o), u128::from(i));
        exact = exact.and_then(|acc| {
            let (n, d) = (
                acc.numer().checked_mul(*factor.numer())?,
                acc.denom().checked_mul(*factor.denom())?,
            );
            Some(Ratio::new(n, d))
        });
    }
    match exact {
        Some(r) => *r.numer() as f64 / *r.denom() as f64,
        None => approx,
    }
}

pub fn global_kept_rate(all_stats: &[StageStats]) -> GlobalRates {
    GlobalRates {
        doc_kept_rate: kept_rate_product(all_stats.iter().map(|s| (s.docs_in, s.docs_out))),
        byte_kept_rate: kept_rate_product(
            all_stats
                .iter()
                .filter(|s| s.governing_metric == Metric::Bytes)
                .map(|s| (s.bytes_in, s.bytes_out)),
        ),
    }
}

/// Problems that did not stop the run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Anomalies {
    pub corrupt_records: u64,
    pub non_response_records: u64,
    /// File names of archives that could not be read to the end.
    pub failed_archives: Vec<String>,
}

/// Contents of `stats.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub schema_version: u32,
    pub stages: Vec<StageStats>,
    pub global: GlobalRates,
    pub anomalies: Anomalies,
}

impl StatsReport {
    pub fn new(stages: Vec<StageStats>, anomalies: Anomalies) -> Self {
        StatsReport {
            schema_version: SCHEMA_VERSION,
            global: global_kept_rate(&stages),
            stages,
            anomalies,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Aligned per-stage counts.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<10} {:<9} {:>10} {:>10} {:>14} {:>14} {:>8}",
            "stage", "metric", "docs_in", "docs_out", "bytes_in", "bytes_out", "removed"
        );
        for s in &self.stages {
            let metric = match s.governing_metric {
                Metric::Documents => "docs",
                Metric::Bytes => "bytes",
            };
            let _ = writeln!(
                out,
                "{:<10} {:<9} {:>10} {:>10} {:>14} {:>14} {:>7.2}%",
                s.stage_name,
                metric,
                s.docs_in,
                s.docs_out,
                s.bytes_in,
                s.bytes_out,
                100.0 * relative_removal_rate(s)
            );
        }
        out
    }

    /// Relative removal rate against the previous stage and cumulative kept
    /// rate along each chain, followed by the reason breakdown.
    pub fn to_summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<10} {:>14} {:>14}   reasons",
            "stage", "removal rate", "global kept"
        );
        let mut doc_factors = Vec::new();
        let mut byte_factors = Vec::new();
        for s in &self.stages {
            doc_factors.push((s.docs_in, s.docs_out));
            let kept = match s.governing_metric {
                Metric::Documents => kept_rate_product(doc_factors.iter().copied()),
                Metric::Bytes => {
                    byte_factors.push((s.bytes_in, s.bytes_out));
                    kept_rate_product(byte_factors.iter().copied())
                }
            };
            let unit = match s.governing_metric {
                Metric::Documents => "docs",
                Metric::Bytes => "bytes",
            };
            let reasons: Vec<String> = s.removal_reasons.iter().map(|(r, n)| format!("{r}={n}")).collect();
            let _ = writeln!(
                out,
                "{:<10} {:>8.2}% {:<5} {:>7.2}% {:<5} {}{}",
                s.stage_name,
                100.0 * relative_removal_rate(s),
                unit,
                100.0 * kept,
                unit,
                reasons.join(" "),
                if s.zero_input() { " (zero input)" } else { "" }
            );
        }
        let _ = writeln!(
            out,
            "global kept rate: {:.4}% of documents, {:.4}% of bytes (line-level stages)",
            100.0 * self.global.doc_kept_rate,
            100.0 * self.global.byte_kept_rate
        );
        let a = &self.anomalies;
        if a.corrupt_records > 0 || !a.failed_archives.is_empty() {
            let _ = writeln!(
                out,
                "anomalies: {} corrupt records, {} failed archives",
                a.corrupt_records,
                a.failed_archives.len()
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stats(stage: Stage, docs: (u64, u64), bytes: (u64, u64)) -> StageStats {
        StageStats {
            docs_in: docs.0,
            docs_out: docs.1,
            bytes_in: bytes.0,
            bytes_out: bytes.1,
            ..StageStats::new(stage)
        }
    }

    #[test]
    fn removal_rate_examples() {
        assert_eq!(relative_removal_rate(&stats(Stage::Langid, (100, 40), (0, 0))), 0.6);
        assert_eq!(relative_removal_rate(&stats(Stage::Langid, (7, 7), (0, 0))), 0.0);
        let zero = stats(Stage::Langid, (0, 0), (0, 0));
        assert_eq!(relative_removal_rate(&zero), 0.0);
        assert!(zero.zero_input());
        // byte-governed stage uses bytes
        assert_eq!(relative_removal_rate(&stats(Stage::Gopher, (10, 10), (200, 50))), 0.75);
    }

    #[test]
    fn kept_rate_examples() {
        assert_eq!(kept_rate_product([(10, 5), (4, 2)]), 0.25);
        assert_eq!(kept_rate_product([(3, 3), (9, 9)]), 1.0);
        assert_eq!(kept_rate_product([(0, 0)]), 1.0);
        // telescoping chain equals final / initial exactly
        assert_eq!(kept_rate_product([(1000, 777), (777, 333), (333, 91)]), 91.0 / 1000.0);
    }

    #[test]
    fn global_rates_split_chains() {
        let all = vec![
            stats(Stage::Prefilter, (10, 8), (5000, 4000)),
            stats(Stage::Extract, (8, 8), (4000, 900)),
            stats(Stage::Langid, (8, 6), (900, 700)),
            stats(Stage::Gopher, (6, 4), (700, 350)),
        ];
        let g = global_kept_rate(&all);
        assert_eq!(g.doc_kept_rate, 0.4);
        assert_eq!(g.byte_kept_rate, 0.5);
    }

    #[test]
    fn record_conserves() {
        let mut s = StageStats::new(Stage::Gopher);
        s.record(10, None, 10);
        s.record(20, Some(Reason::TooShort), 0);
        s.record(5, Some(Reason::TooShort), 0);
        assert_eq!((s.docs_in, s.docs_out, s.bytes_in, s.bytes_out), (3, 1, 35, 10));
        assert_eq!(s.docs_in, s.docs_out + s.removed());
    }

    #[test]
    fn json_round_trip() {
        let mut s = StageStats::new(Stage::Langid);
        s.record(3, Some(Reason::SimplifiedScript), 0);
        let r = StatsReport::new(vec![s], Anomalies::default());
        let json = r.to_json();
        assert!(json.contains("\"SimplifiedScript\": 1"));
        let back: StatsReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        assert!(r.to_table().contains("langid"));
        assert!(r.to_summary().contains("SimplifiedScript=1"));
    }
}
