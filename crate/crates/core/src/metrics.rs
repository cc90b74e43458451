//! Evaluation suite: z-normalization, aligned/warped series distance, distance
//! dispersion, MAPE, the paired t statistic, and the reproducibility Z-score.

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::float::{abs, sqrt};

/// Divisor guard for constant series, per the normalization definition.
pub const EPSILON: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricsError {
    #[error("series lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("series must be non-empty and finite: {0}")]
    InvalidSeries(String),
    #[error("need at least two pairs for a paired t statistic")]
    TooFewPairs,
    #[error("empty distance list")]
    EmptyList,
    #[error("every actual value is zero; MAPE undefined")]
    AllZeroActual,
    #[error("need at least two replicates")]
    TooFewReplicates,
}

/// A finite, non-empty series of reals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series(Vec<f64>);

impl Series {
    pub fn new(values: Vec<f64>) -> Result<Series, MetricsError> {
        if values.is_empty() {
            return Err(MetricsError::InvalidSeries("empty".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(MetricsError::InvalidSeries("non-finite value".into()));
        }
        Ok(Series(values))
    }

    pub fn from_counts(counts: &[i64]) -> Series {
        Series(counts.iter().map(|&c| c as f64).collect())
    }

    pub fn from_u64(counts: &[u64]) -> Series {
        Series(counts.iter().map(|&c| c as f64).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Population standard deviation (divisor n).
fn population_std(values: &[f64]) -> f64 {
    let mu = mean(values);
    let var = values.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / values.len() as f64;
    sqrt(var)
}

/// Sample standard deviation (divisor n-1).
fn sample_std(values: &[f64]) -> f64 {
    let mu = mean(values);
    let var = values.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / (values.len() as f64 - 1.0);
    sqrt(var)
}

/// Transform to zero mean and unit variance: `(x - mean) / (pop_std + eps)`.
pub fn znormalize(series: &Series) -> Series {
    let mu = mean(series.values());
    let sigma = population_std(series.values());
    Series(
        series
            .values()
            .iter()
            .map(|v| (v - mu) / (sigma + EPSILON))
            .collect(),
    )
}

/// Pointwise distance measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PointMetric {
    Abs,
    Squared,
}

impl PointMetric {
    fn eval(self, x: f64, y: f64) -> f64 {
        match self {
            PointMetric::Abs => abs(x - y),
            PointMetric::Squared => (x - y) * (x - y),
        }
    }
}

/// Alignment mode for [`series_distance`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlignMode {
    /// Day-aligned pointwise sum: values at equal indices are compared
    /// directly. The default.
    Aligned,
    /// Classic dynamic-programming minimal-alignment distance.
    Warped,
}

/// Distance between two series after z-normalizing each.
pub fn series_distance(
    a: &Series,
    b: &Series,
    metric: PointMetric,
    mode: AlignMode,
) -> Result<f64, MetricsError> {
    let za = znormalize(a);
    let zb = znormalize(b);
    match mode {
        AlignMode::Aligned => {
            if za.len() != zb.len() {
                return Err(MetricsError::LengthMismatch(za.len(), zb.len()));
            }
            Ok(za
                .values()
                .iter()
                .zip(zb.values())
                .map(|(&x, &y)| metric.eval(x, y))
                .sum())
        }
        AlignMode::Warped => Ok(warped_distance(za.values(), zb.values(), metric)),
    }
}

fn warped_distance(a: &[f64], b: &[f64], metric: PointMetric) -> f64 {
    let n = a.len();
    let m = b.len();
    let mut prev = alloc::vec![f64::INFINITY; m + 1];
    let mut row = alloc::vec![f64::INFINITY; m + 1];
    prev[0] = 0.0;
    for i in 1..=n {
        row[0] = f64::INFINITY;
        for j in 1..=m {
            let cost = metric.eval(a[i - 1], b[j - 1]);
            let best = prev[j].min(row[j - 1]).min(prev[j - 1]);
            row[j] = cost + best;
        }
        core::mem::swap(&mut prev, &mut row);
    }
    prev[m]
}

/// Mean and population standard deviation (divisor k) of distance values.
pub fn dtw_dispersion(distances: &[f64]) -> Result<(f64, f64), MetricsError> {
    if distances.is_empty() {
        return Err(MetricsError::EmptyList);
    }
    Ok((mean(distances), population_std(distances)))
}

/// Mean absolute percentage error, in percent.
///
/// Days with a zero actual are skipped with a warning; an all-zero actual
/// series is an error.
pub fn mape(pred: &Series, actual: &Series) -> Result<f64, MetricsError> {
    if pred.len() != actual.len() {
        return Err(MetricsError::LengthMismatch(pred.len(), actual.len()));
    }
    let mut sum = 0.0f64;
    let mut n = 0usize;
    let mut skipped = 0usize;
    for (&p, &a) in pred.values().iter().zip(actual.values()) {
        if a == 0.0 {
            skipped += 1;
            continue;
        }
        sum += abs(p - a) / abs(a);
        n += 1;
    }
    if n == 0 {
        return Err(MetricsError::AllZeroActual);
    }
    if skipped > 0 {
        log::warn!("MAPE skipped {skipped} zero-actual day(s)");
    }
    Ok(100.0 * sum / n as f64)
}

/// Paired t statistic over per-index differences.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairedT {
    pub t: f64,
    /// Zero-variance differences with a non-zero mean: the statistic diverges.
    pub diverged: bool,
    /// Identical series: t is 0 by convention.
    pub zero_variance: bool,
}

/// Paired t statistic `mean(d) / (sample_std(d) / sqrt(n))`, `d = pred - actual`.
pub fn paired_t(pred: &Series, actual: &Series) -> Result<PairedT, MetricsError> {
    if pred.len() != actual.len() {
        return Err(MetricsError::LengthMismatch(pred.len(), actual.len()));
    }
    if pred.len() < 2 {
        return Err(MetricsError::TooFewPairs);
    }
    let d: Vec<f64> = pred
        .values()
        .iter()
        .zip(actual.values())
        .map(|(&p, &a)| p - a)
        .collect();
    let mu = mean(&d);
    let s = sample_std(&d);
    if s == 0.0 {
        if mu == 0.0 {
            return Ok(PairedT {
                t: 0.0,
                diverged: false,
                zero_variance: true,
            });
        }
        return Ok(PairedT {
            t: if mu > 0.0 {
                f64::INFINITY
            } else {
                f64::NEG_INFINITY
            },
            diverged: true,
            zero_variance: true,
        });
    }
    Ok(PairedT {
        t: mu / (s / sqrt(d.len() as f64)),
        diverged: false,
        zero_variance: false,
    })
}

/// Reproducibility Z-scores of replicate totals against a reference value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZScores {
    pub per_replicate: Vec<f64>,
    /// Z of the replicate mean against the reference.
    pub mean_z: f64,
    /// Every replicate equals the reference; all z reported as 0.
    pub zero_variance: bool,
}

impl ZScores {
    pub fn max_abs(&self) -> f64 {
        self.per_replicate
            .iter()
            .fold(0.0f64, |m, &z| m.max(abs(z)))
    }
}

/// Label a |Z| value per the reproducibility regime.
pub fn z_label(max_abs_z: f64) -> &'static str {
    if max_abs_z < 1.0 {
        "excellent"
    } else if max_abs_z < 3.0 {
        "acceptable"
    } else {
        "deviant"
    }
}

/// Z-score of each replicate against `reference`, scaled by the sample-style
/// dispersion of the deviations from the reference (divisor n-1).
///
/// Centering the dispersion on the reference rather than the replicate mean
/// keeps the score meaningful for n as small as 2: a set of repeats that all
/// miss the reference by a similar margin scores |z| = sqrt((n-1)/n) < 1,
/// while one wild run pushes its own score toward sqrt(n-1).
pub fn reproducibility_z(
    replicate_totals: &[f64],
    reference: f64,
) -> Result<ZScores, MetricsError> {
    let n = replicate_totals.len();
    if n < 2 {
        return Err(MetricsError::TooFewReplicates);
    }
    let sq_dev: f64 = replicate_totals
        .iter()
        .map(|&x| (x - reference) * (x - reference))
        .sum();
    let spread = sqrt(sq_dev / (n as f64 - 1.0));
    if spread == 0.0 {
        return Ok(ZScores {
            per_replicate: alloc::vec![0.0; n],
            mean_z: 0.0,
            zero_variance: true,
        });
    }
    let per_replicate: Vec<f64> = replicate_totals
        .iter()
        .map(|&x| (x - reference) / spread)
        .collect();
    let mean_z = (mean(replicate_totals) - reference) / spread;
    Ok(ZScores {
        per_replicate,
        mean_z,
        zero_variance: false,
    })
}

/// Per-action evaluation of one simulated series against ground truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionMetrics {
    pub action: String,
    pub t_statistic: f64,
    pub t_diverged: bool,
    pub mape_percent: Option<f64>,
    pub dtw: f64,
}

/// Evaluation report for one event (optionally with replicate Z-scores).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub event_id: String,
    /// Paired t on daily views, predicted vs ground truth.
    pub t_statistic: f64,
    pub t_diverged: bool,
    /// MAPE on daily views, in percent.
    pub mape_percent: f64,
    /// Aligned distances for views/likes/comments/shares, in that order.
    pub dtw_distances: Vec<f64>,
    pub dtw_mean: f64,
    pub dtw_std: f64,
    /// Per-replicate Z-scores; empty for single runs.
    pub z_scores: Vec<f64>,
    pub z_max_abs: Option<f64>,
    pub z_label: Option<String>,
    pub per_action: Vec<ActionMetrics>,
    /// Total simulated and ground-truth views, for cross-event aggregation.
    pub pred_total_views: f64,
    pub actual_total_views: f64,
}

/// Build a [`MetricReport`] from per-action daily totals and ground truth.
///
/// `pred`/`actual` hold the views/likes/comments/shares series in order.
/// `replicate_totals` are per-seed total views; `reference` is the
/// ground-truth total that anchors the reproducibility Z.
pub fn build_report(
    event_id: &str,
    pred: &[Series; 4],
    actual: &[Series; 4],
    replicate_totals: &[f64],
    reference: f64,
) -> Result<MetricReport, MetricsError> {
    const NAMES: [&str; 4] = ["views", "likes", "comments", "shares"];
    let mut per_action = Vec::with_capacity(4);
    let mut distances = Vec::with_capacity(4);
    for i in 0..4 {
        let t = paired_t(&pred[i], &actual[i])?;
        let m = match mape(&pred[i], &actual[i]) {
            Ok(v) => Some(v),
            Err(MetricsError::AllZeroActual) => None,
            Err(e) => return Err(e),
        };
        let d = series_distance(&pred[i], &actual[i], PointMetric::Abs, AlignMode::Aligned)?;
        distances.push(d);
        per_action.push(ActionMetrics {
            action: NAMES[i].into(),
            t_statistic: t.t,
            t_diverged: t.diverged,
            mape_percent: m,
            dtw: d,
        });
    }
    let (dtw_mean, dtw_std) = dtw_dispersion(&distances)?;
    let views_t = per_action[0].clone();
    let views_mape = per_action[0]
        .mape_percent
        .ok_or(MetricsError::AllZeroActual)?;

    let (z_scores, z_max_abs, z_label_value) = if replicate_totals.len() >= 2 {
        let z = reproducibility_z(replicate_totals, reference)?;
        let max_abs = z.max_abs();
        (
            z.per_replicate,
            Some(max_abs),
            Some(String::from(z_label(max_abs))),
        )
    } else {
        (Vec::new(), None, None)
    };

    Ok(MetricReport {
        event_id: event_id.into(),
        t_statistic: views_t.t_statistic,
        t_diverged: views_t.t_diverged,
        mape_percent: views_mape,
        dtw_distances: distances,
        dtw_mean,
        dtw_std,
        z_scores,
        z_max_abs,
        z_label: z_label_value,
        per_action,
        pred_total_views: pred[0].values().iter().sum(),
        actual_total_views: actual[0].values().iter().sum(),
    })
}
