use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Outcome of a two-sample t-test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TTestResult {
    pub t_statistic: f64,
    pub p_value: f64,
    pub df: f64,
    pub reject_at_005: bool,
}

impl TTestResult {
    fn new(t: f64, df: f64) -> Self {
        let p = student_t_two_sided_p(t, df);
        TTestResult {
            t_statistic: t,
            p_value: p,
            df,
            reject_at_005: p < 0.05,
        }
    }
}

impl fmt::Display for TTestResult {
    /// `t-statistic of 5.36 (p-value = 9.14e-08)`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "t-statistic of {} (p-value = {})",
            format_t(self.t_statistic),
            format_p(self.p_value)
        )
    }
}

/// Two decimals.
pub fn format_t(t: f64) -> String {
    format!("{t:.2}")
}

/// Scientific notation with a two-digit signed exponent, e.g. `9.14e-08`.
pub fn format_p(p: f64) -> String {
    let s = format!("{p:.2e}");
    match s.split_once('e') {
        Some((mantissa, exp)) => {
            let (sign, digits) = match exp.strip_prefix('-') {
                Some(d) => ('-', d),
                None => ('+', exp),
            };
            format!("{mantissa}e{sign}{digits:0>2}")
        }
        None => s,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TTestVariant {
    #[default]
    Welch,
    Pooled,
}

fn moments(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

fn check_samples(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::InsufficientSamples { a: a.len(), b: b.len() });
    }
    Ok(())
}

/// Welch's unequal-variance two-sample t-test, two-sided.
pub fn welch_t_test(a: &[f64], b: &[f64]) -> Result<TTestResult> {
    check_samples(a, b)?;
    let (ma, va) = moments(a);
    let (mb, vb) = moments(b);
    if va == 0.0 || vb == 0.0 {
        return Err(Error::DegenerateVariance);
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (qa, qb) = (va / na, vb / nb);
    let t = (ma - mb) / (qa + qb).sqrt();
    let df = (qa + qb).powi(2) / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
    Ok(TTestResult::new(t, df))
}

/// Student's pooled-variance two-sample t-test, two-sided.
pub fn pooled_t_test(a: &[f64], b: &[f64]) -> Result<TTestResult> {
    check_samples(a, b)?;
    let (ma, va) = moments(a);
    let (mb, vb) = moments(b);
    if va == 0.0 || vb == 0.0 {
        return Err(Error::DegenerateVariance);
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let df = na + nb - 2.0;
    let sp2 = ((na - 1.0) * va + (nb - 1.0) * vb) / df;
    let t = (ma - mb) / (sp2 * (1.0 / na + 1.0 / nb)).sqrt();
    Ok(TTestResult::new(t, df))
}

pub fn t_test(variant: TTestVariant, a: &[f64], b: &[f64]) -> Result<TTestResult> {
    match variant {
        TTestVariant::Welch => welch_t_test(a, b),
        TTestVariant::Pooled => pooled_t_test(a, b),
    }
}

/// `P(|T| >= |t|)` for Student's t with `df` degrees of freedom.
pub fn student_t_two_sided_p(t: f64, df: f64) -> f64 {
    if t.is_nan() || df.is_nan() || df <= 0.0 {
        return f64::NAN;
    }
    if t.is_infinite() {
        return 0.0;
    }
    let x = df / (df + t * t);
    regularized_incomplete_beta(df / 2.0, 0.5, x).clamp(0.0, 1.0)
}

/// Lanczos approximation (g = 7, n = 9).
#[allow(clippy::excessive_precision)]
pub fn ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const COEF: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = COEF[0];
    for (i, c) in COEF.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// `I_x(a, b)` by the continued fraction (modified Lentz), using the
/// symmetry `I_x(a, b) = 1 - I_{1-x}(b, a)` where it converges faster.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    if x < (a + 1.0) / (a + b + 2.0) {
        ln_front.exp() * beta_continued_fraction(a, b, x) / a
    } else {
        1.0 - ln_front.exp() * beta_continued_fraction(b, a, 1.0 - x) / b
    }
}

fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    let (qab, qap, qam) = (a + b, a + 1.0, a - 1.0);
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=10_000 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Two-sided p-values from scipy.stats.t.sf(|t|, df) * 2.
    const SCIPY: &[(f64, f64, f64)] = &[
        (0.5, 1.0, 0.704_832_764_699_133_6),
        (1.0, 8.0, 0.346_593_507_087_334_16),
        (2.0, 3.0, 0.139_325_968_558_843_1),
        (5.36, 1998.0, 9.283_739_142_819_376e-8),
        (10.13, 1998.0, 1.490_741_201_744_217_3e-23),
        (1.96, 1e6, 0.049_996_067_585_269_78),
        (3.0, 2.5, 0.072_576_095_549_031_83),
        (0.1, 30.0, 0.921_009_611_790_271_1),
        (8.0, 5.0, 0.000_492_906_660_572_443_7),
    ];

    #[test]
    fn p_values_match_reference() {
        for &(t, df, p) in SCIPY {
            let got = student_t_two_sided_p(t, df);
            assert!((got - p).abs() < 1e-9, "t={t} df={df}: {got} vs {p}");
            if p < 1e-6 {
                assert!(((got - p) / p).abs() < 1e-6, "relative error at t={t}");
            }
        }
    }

    #[test]
    fn ln_gamma_known_values() {
        assert!((ln_gamma(1.0)).abs() < 1e-13);
        assert!((ln_gamma(5.0) - 24f64.ln()).abs() < 1e-12);
        assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-13);
    }

    #[test]
    fn welch_worked_example() {
        let r = welch_t_test(&[1., 2., 3., 4., 5.], &[2., 3., 4., 5., 6.]).unwrap();
        assert!((r.t_statistic + 1.0).abs() < 1e-12);
        assert!((r.df - 8.0).abs() < 1e-12);
        assert!((r.p_value - 0.346_593_507_087_334_16).abs() < 1e-9);
        assert!(!r.reject_at_005);
    }

    #[test]
    fn welch_unequal_variances() {
        // scipy.stats.ttest_ind(a, b, equal_var=False)
        let a = [1., 2., 3., 4., 5., 10.];
        let b = [2., 3., 4., 5., 6.];
        let r = welch_t_test(&a, &b).unwrap();
        assert!((r.t_statistic - 0.112_508_790_092_602_58).abs() < 1e-12);
        assert!((r.df - 7.563_015_026_660_205).abs() < 1e-9);
        assert!((r.p_value - 0.913_348_561_603_819_5).abs() < 1e-9);
        let r = pooled_t_test(&a, &b).unwrap();
        assert!((r.t_statistic - 0.105_867_700_986_088_01).abs() < 1e-12);
        assert_eq!(r.df, 9.0);
        assert!((r.p_value - 0.918_009_419_826_044_1).abs() < 1e-9);
    }

    #[test]
    fn identity_gives_p_one() {
        let a = [1., 3., 4., 9.];
        let r = welch_t_test(&a, &a).unwrap();
        assert_eq!(r.t_statistic, 0.0);
        assert_eq!(r.p_value, 1.0);
        assert!(!r.reject_at_005);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            welch_t_test(&[1.0], &[1.0, 2.0]),
            Err(Error::InsufficientSamples { a: 1, b: 2 })
        ));
        assert!(matches!(
            welch_t_test(&[2.0, 2.0], &[1.0, 2.0]),
            Err(Error::DegenerateVariance)
        ));
        assert!(matches!(
            pooled_t_test(&[1.0, 2.0], &[3.0, 3.0]),
            Err(Error::DegenerateVariance)
        ));
    }

    #[test]
    fn formatting() {
        assert_eq!(format_p(9.14e-8), "9.14e-08");
        assert_eq!(format_p(0.3466), "3.47e-01");
        assert_eq!(format_p(1.0), "1.00e+00");
        assert_eq!(format_p(1.49e-23), "1.49e-23");
        assert_eq!(format_t(5.3612), "5.36");
        let r = TTestResult {
            t_statistic: 5.36,
            p_value: 9.14e-8,
            df: 1998.0,
            reject_at_005: true,
        };
        assert_eq!(r.to_string(), "t-statistic of 5.36 (p-value = 9.14e-08)");
    }

    proptest! {
        #[test]
        fn antisymmetric(
            a in prop::collection::vec(-100.0f64..100.0, 2..20),
            b in prop::collection::vec(-100.0f64..100.0, 2..20),
        ) {
            let (Ok(ab), Ok(ba)) = (welch_t_test(&a, &b), welch_t_test(&b, &a)) else {
                return Ok(());
            };
            prop_assert_eq!(ab.t_statistic, -ba.t_statistic);
            prop_assert_eq!(ab.p_value, ba.p_value);
            prop_assert_eq!(ab.df, ba.df);
        }

        #[test]
        fn scale_invariant(
            a in prop::collection::vec(0.0f64..5.0, 2..20),
            b in prop::collection::vec(0.0f64..5.0, 2..20),
            c in 0.01f64..100.0,
        ) {
            let (Ok(r1), Ok(r2)) = (
                welch_t_test(&a, &b),
                welch_t_test(
                    &a.iter().map(|x| x * c).collect::<Vec<_>>(),
                    &b.iter().map(|x| x * c).collect::<Vec<_>>(),
                ),
            ) else {
                return Ok(());
            };
            prop_assert!((r1.t_statistic - r2.t_statistic).abs() <= 1e-12 * r1.t_statistic.abs().max(1.0));
            prop_assert!((r1.p_value - r2.p_value).abs() < 1e-12);
        }

        #[test]
        fn p_decreases_with_abs_t(df in 0.5f64..500.0, t1 in 0.0f64..20.0, dt in 0.0f64..5.0) {
            let p1 = student_t_two_sided_p(t1, df);
            let p2 = student_t_two_sided_p(t1 + dt, df);
            prop_assert!(p2 <= p1 + 1e-15, "df={} t={} p1={} p2={}", df, t1, p1, p2);
            prop_assert!((0.0..=1.0).contains(&p1));
            prop_assert_eq!(student_t_two_sided_p(-t1, df), p1);
        }
    }
}
