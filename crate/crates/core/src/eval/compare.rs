use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::ttest::{format_p, format_t, t_test, TTestVariant};
use super::ScoreCard;
use crate::error::{Error, Result};

pub const MEASURES: [&str; 4] = ["naturalness", "educational", "sensitivity", "total"];

fn measure(card: &ScoreCard, m: &str) -> f64 {
    f64::from(match m {
        "naturalness" => card.naturalness,
        "educational" => card.educational,
        "sensitivity" => card.sensitivity,
        _ => card.total,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageSummary {
    pub n: usize,
    pub means: BTreeMap<String, f64>,
}

/// One pairwise test; `error` is set and the statistics are absent when
/// the pair could not be tested.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairTest {
    pub a: String,
    pub b: String,
    pub measure: String,
    pub t: Option<f64>,
    pub p: Option<f64>,
    pub df: Option<f64>,
    pub reject: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub stages: BTreeMap<String, StageSummary>,
    pub pairs: Vec<PairTest>,
}

/// All pairwise tests for each criterion and the total, in stage input order.
pub fn compare_stages(cards_by_stage: &[(String, Vec<ScoreCard>)], variant: TTestVariant) -> Result<ComparisonReport> {
    if cards_by_stage.len() < 2 {
        return Err(Error::ConfigInvalid("comparison needs at least two stages".into()));
    }
    let values = |cards: &[ScoreCard], m: &str| cards.iter().map(|c| measure(c, m)).collect::<Vec<_>>();

    let stages = cards_by_stage
        .iter()
        .map(|(name, cards)| {
            let means = MEASURES
                .iter()
                .map(|m| {
                    let v = values(cards, m);
                    let mean = if v.is_empty() {
                        f64::NAN
                    } else {
                        v.iter().sum::<f64>() / v.len() as f64
                    };
                    (m.to_string(), mean)
                })
                .collect();
            (name.clone(), StageSummary { n: cards.len(), means })
        })
        .collect();

    let mut pairs = Vec::new();
    for (i, (a, cards_a)) in cards_by_stage.iter().enumerate() {
        for (b, cards_b) in &cards_by_stage[i + 1..] {
            for m in MEASURES {
                let r = t_test(variant, &values(cards_a, m), &values(cards_b, m));
                pairs.push(match r {
                    Ok(r) => PairTest {
                        a: a.clone(),
                        b: b.clone(),
                        measure: m.into(),
                        t: Some(r.t_statistic),
                        p: Some(r.p_value),
                        df: Some(r.df),
                        reject: Some(r.reject_at_005),
                        error: None,
                    },
                    Err(e) => PairTest {
                        a: a.clone(),
                        b: b.clone(),
                        measure: m.into(),
                        t: None,
                        p: None,
                        df: None,
                        reject: None,
                        error: Some(e.to_string()),
                    },
                });
            }
        }
    }
    Ok(ComparisonReport { stages, pairs })
}

impl ComparisonReport {
    /// Aligned text rendering: per-stage means, then one row per test.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<16} {:>6} {:>12} {:>12} {:>12} {:>8}",
            "stage", "n", MEASURES[0], MEASURES[1], MEASURES[2], MEASURES[3]
        );
        for (name, s) in &self.stages {
            let _ = write!(out, "{name:<16} {:>6}", s.n);
            for m in MEASURES {
                let _ = write!(out, " {:>w$.2}", s.means[m], w = if m == "total" { 8 } else { 12 });
            }
            out.push('\n');
        }
        out.push('\n');
        let _ = writeln!(
            out,
            "{:<16} {:<16} {:<12} {:>8} {:>10} {:>7}",
            "a", "b", "measure", "t", "p", "reject"
        );
        for p in &self.pairs {
            match (p.t, p.p, p.reject) {
                (Some(t), Some(pv), Some(r)) => {
                    let _ = writeln!(
                        out,
                        "{:<16} {:<16} {:<12} {:>8} {:>10} {:>7}",
                        p.a,
                        p.b,
                        p.measure,
                        format_t(t),
                        format_p(pv),
                        if r { "yes" } else { "no" }
                    );
                }
                _ => {
                    let _ = writeln!(
                        out,
                        "{:<16} {:<16} {:<12} untested: {}",
                        p.a,
                        p.b,
                        p.measure,
                        p.error.as_deref().unwrap_or("")
                    );
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cards(vals: &[(u8, u8, u8)]) -> Vec<ScoreCard> {
        vals.iter()
            .enumerate()
            .map(|(i, &(n, e, s))| ScoreCard::new(format!("d{i}"), n, e, s).unwrap())
            .collect()
    }

    #[test]
    fn identical_stages_have_zero_t() {
        let c = cards(&[(1, 2, 3), (4, 5, 0), (2, 2, 2)]);
        let r = compare_stages(&[("a".into(), c.clone()), ("b".into(), c)], TTestVariant::Welch).unwrap();
        assert_eq!(r.pairs.len(), 4);
        assert!(r.pairs.iter().all(|p| p.t == Some(0.0) && p.p == Some(1.0)));
    }

    #[test]
    fn three_stages_give_twelve_tests() {
        let s = |k: u8| cards(&[(k, 1, 2), (k + 1, 3, 1), (0, 2, 5)]);
        let r = compare_stages(
            &[("x".into(), s(0)), ("y".into(), s(1)), ("z".into(), s(2))],
            TTestVariant::Welch,
        )
        .unwrap();
        assert_eq!(r.pairs.len(), 12);
        assert!(r.pairs.iter().all(|p| p.error.is_none()));
        assert_eq!(r.stages["x"].n, 3);
        assert!((r.stages["x"].means["total"] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn constant_stage_is_isolated() {
        let varied = cards(&[(1, 2, 3), (4, 5, 0), (2, 2, 2)]);
        let other = cards(&[(3, 1, 1), (5, 0, 4), (0, 3, 2)]);
        let constant = cards(&[(3, 3, 3), (3, 3, 3)]);
        let r = compare_stages(
            &[("v".into(), varied), ("o".into(), other), ("c".into(), constant)],
            TTestVariant::Welch,
        )
        .unwrap();
        for p in &r.pairs {
            if p.b == "c" {
                assert!(p.error.as_deref().unwrap().contains("variance"));
            } else {
                assert!(p.error.is_none());
            }
        }
        let table = r.to_table();
        assert!(table.contains("untested"));
        assert!(table.contains("e-") || table.contains("e+"));
    }

    #[test]
    fn needs_two_stages() {
        assert!(compare_stages(&[("a".into(), vec![])], TTestVariant::Welch).is_err());
    }
}
