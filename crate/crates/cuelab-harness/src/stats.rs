//! Statistical scoring: Kolmogorov-Smirnov tests with the asymptotic
//! p-value and log-log least-squares regression.

use crate::{invalid, Result};

/// A sample prepared for distribution comparisons.
#[derive(Debug, Clone)]
pub struct EmpiricalLaw {
    values: Vec<f64>,
    pub source: String,
}

impl EmpiricalLaw {
    /// Sorts the sample; rejects non-finite entries.
    pub fn new(mut values: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("empirical law requires finite values"));
        }
        values.sort_by(|a, b| a.partial_cmp(b).expect("finite values are ordered"));
        Ok(EmpiricalLaw {
            values,
            source: source.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Standard error of the sample mean.
    pub fn se_of_mean(&self) -> f64 {
        let n = self.values.len() as f64;
        let mean = self.mean();
        let var = self.values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

const MIN_KS_SAMPLE: usize = 50;

/// Kolmogorov asymptotic tail Q(λ) = 2 Σ_{k≥1} (-1)^{k-1} e^{-2k²λ²}.
fn kolmogorov_q(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let term = (-2.0 * (k as f64 * lambda).powi(2)).exp();
        sum += sign * term;
        if term < 1e-12 {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Stephens' finite-sample correction for the effective size `n_eff`.
fn ks_p_value(statistic: f64, n_eff: f64) -> f64 {
    let root = n_eff.sqrt();
    kolmogorov_q((root + 0.12 + 0.11 / root) * statistic)
}

/// One-sample test of `sample` against a reference CDF.
pub fn ks_one_sample(sample: &EmpiricalLaw, cdf: impl Fn(f64) -> f64) -> Result<KsResult> {
    let n = sample.len();
    if n < MIN_KS_SAMPLE {
        return Err(invalid(format!(
            "one-sample test needs at least {MIN_KS_SAMPLE} points, got {n}"
        )));
    }
    let mut statistic: f64 = 0.0;
    for (i, &x) in sample.values().iter().enumerate() {
        let f = cdf(x);
        let above = (i + 1) as f64 / n as f64 - f;
        let below = f - i as f64 / n as f64;
        statistic = statistic.max(above).max(below);
    }
    Ok(KsResult {
        statistic,
        p_value: ks_p_value(statistic, n as f64),
    })
}

/// Two-sample test; the supremum gap is scanned over the merged order.
pub fn ks_two_sample(a: &EmpiricalLaw, b: &EmpiricalLaw) -> Result<KsResult> {
    let (n, m) = (a.len(), b.len());
    if n < MIN_KS_SAMPLE || m < MIN_KS_SAMPLE {
        return Err(invalid(format!(
            "two-sample test needs at least {MIN_KS_SAMPLE} points per side, got {n} and {m}"
        )));
    }
    let (xs, ys) = (a.values(), b.values());
    let (mut i, mut j) = (0usize, 0usize);
    let mut statistic: f64 = 0.0;
    while i < n && j < m {
        let v = xs[i].min(ys[j]);
        while i < n && xs[i] <= v {
            i += 1;
        }
        while j < m && ys[j] <= v {
            j += 1;
        }
        statistic = statistic.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    let n_eff = (n * m) as f64 / (n + m) as f64;
    Ok(KsResult {
        statistic,
        p_value: ks_p_value(statistic, n_eff),
    })
}

#[derive(Debug, Clone, Copy)]
pub struct Regression {
    pub slope: f64,
    pub stderr: f64,
}

/// Least-squares slope of log y against log x. The x-range must span at
/// least the width of the mesoscopic window (a factor of 8).
pub fn scaling_regression(pairs: &[(f64, f64)]) -> Result<Regression> {
    if pairs.len() < 5 {
        return Err(invalid("regression needs at least 5 points"));
    }
    if pairs.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return Err(invalid("log-log regression needs positive coordinates"));
    }
    let xs: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
    let span = xs.iter().cloned().fold(f64::MIN, f64::max)
        - xs.iter().cloned().fold(f64::MAX, f64::min);
    if span < 8.0f64.ln() - 1e-9 {
        return Err(invalid("x-range must span at least a factor of 8"));
    }
    let n = xs.len() as f64;
    let x_bar = xs.iter().sum::<f64>() / n;
    let y_bar = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - x_bar).powi(2)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - x_bar) * (y - y_bar))
        .sum();
    let slope = sxy / sxx;
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - y_bar - slope * (x - x_bar)).powi(2))
        .sum();
    let stderr = (rss / (n - 2.0) / sxx).sqrt();
    Ok(Regression { slope, stderr })
}
