//! Metric time series, correlation against GDP, and trade-volume change
//! statistics.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::{GdpSeries, TradeRecord};
use crate::metrics::{Metric, MetricsRow};
use crate::years::YearRange;

#[derive(Debug, Clone, PartialEq)]
pub struct MetricSeries {
    pub sector: String,
    pub metric: Metric,
    pub points: BTreeMap<i32, f64>,
}

/// Collects one point per year for `sector`. Years without a value (an absent
/// diameter, or no row) are left out.
pub fn assemble_series(rows: &[MetricsRow], sector: &str, metric: &str) -> Result<MetricSeries> {
    let metric: Metric = metric.parse()?;
    let mut points = BTreeMap::new();
    let mut seen = false;
    for row in rows.iter().filter(|r| r.sector == sector) {
        seen = true;
        if let Some(v) = row.value(metric) {
            points.insert(row.year, v);
        }
    }
    if !seen {
        return Err(Error::UnknownSeriesSector(sector.to_string()));
    }
    Ok(MetricSeries {
        sector: sector.to_string(),
        metric,
        points,
    })
}

/// Pearson product-moment correlation, clamped to `[-1, 1]`.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::UndefinedCorrelation(format!(
            "need at least 2 points, have {}",
            x.len()
        )));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::UndefinedCorrelation("non-finite input".into()));
    }
    // r is scale invariant; normalizing first keeps the squares finite.
    let scale = |v: &[f64]| v.iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let (kx, ky) = (scale(x), scale(y));
    if kx == 0.0 || ky == 0.0 {
        return Err(Error::UndefinedCorrelation("zero variance".into()));
    }
    let n = x.len() as f64;
    let mean_x = x.iter().map(|a| a / kx).sum::<f64>() / n;
    let mean_y = y.iter().map(|b| b / ky).sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let dx = a / kx - mean_x;
        let dy = b / ky - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation("zero variance".into()));
    }
    let r = sxy / (sxx.sqrt() * syy.sqrt());
    if !r.is_finite() {
        return Err(Error::UndefinedCorrelation(
            "numerically degenerate input".into(),
        ));
    }
    Ok(r.clamp(-1.0, 1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum CorrelationCell {
    Defined { r: f64, n: usize },
    Undefined { reason: String },
}

impl CorrelationCell {
    pub fn r(&self) -> Option<f64> {
        match self {
            CorrelationCell::Defined { r, .. } => Some(*r),
            CorrelationCell::Undefined { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub year_range: YearRange,
    pub rows: BTreeMap<String, BTreeMap<Metric, CorrelationCell>>,
}

/// Correlates every metric series of every sector in `rows` with the GDP
/// series, over the years both have inside `year_range`.
pub fn correlate_all(
    rows: &[MetricsRow],
    gdp: &GdpSeries,
    year_range: YearRange,
) -> CorrelationReport {
    let mut sectors: Vec<&str> = rows.iter().map(|r| r.sector.as_str()).collect();
    sectors.sort_unstable();
    sectors.dedup();
    let mut out = BTreeMap::new();
    for sector in sectors {
        let mut cells = BTreeMap::new();
        for metric in Metric::ALL {
            let series = assemble_series(rows, sector, metric.key()).expect("sector present");
            let (xs, ys): (Vec<f64>, Vec<f64>) = series
                .points
                .iter()
                .filter(|(y, _)| year_range.contains(**y))
                .filter_map(|(y, v)| gdp.get(*y).map(|g| (*v, g)))
                .unzip();
            let cell = if xs.is_empty() {
                CorrelationCell::Undefined {
                    reason: "no overlapping years".into(),
                }
            } else {
                match pearson(&xs, &ys) {
                    Ok(r) => CorrelationCell::Defined { r, n: xs.len() },
                    Err(e) => CorrelationCell::Undefined {
                        reason: match e {
                            Error::UndefinedCorrelation(why) => why,
                            other => other.to_string(),
                        },
                    },
                }
            };
            cells.insert(metric, cell);
        }
        out.insert(sector.to_string(), cells);
    }
    CorrelationReport {
        year_range,
        rows: out,
    }
}

/// How a year's percentage changes are screened for outliers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OutlierRule {
    None,
    /// Tukey fences `[Q1 - k·IQR, Q3 + k·IQR]`.
    Iqr {
        factor: f64,
    },
    /// `|pct| > threshold`.
    Absolute {
        threshold: f64,
    },
}

impl Default for OutlierRule {
    fn default() -> Self {
        OutlierRule::Iqr { factor: 10.0 }
    }
}

impl fmt::Display for OutlierRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutlierRule::None => f.write_str("none"),
            OutlierRule::Iqr { factor } => write!(f, "iqr:{factor}"),
            OutlierRule::Absolute { threshold } => write!(f, "abs:{threshold}"),
        }
    }
}

impl FromStr for OutlierRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad =
            || Error::InvalidConfig(format!("outlier rule `{s}`; expected none, iqr:K or abs:T"));
        let s = s.trim();
        if s == "none" {
            return Ok(OutlierRule::None);
        }
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        let value: f64 = arg.trim().parse().map_err(|_| bad())?;
        if !(value.is_finite() && value >= 0.0) {
            return Err(bad());
        }
        match kind.trim() {
            "iqr" => Ok(OutlierRule::Iqr { factor: value }),
            "abs" => Ok(OutlierRule::Absolute { threshold: value }),
            _ => Err(bad()),
        }
    }
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let rank = q * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (rank - lo as f64)
}

impl OutlierRule {
    /// Flags for each element of `values`.
    pub fn flag(&self, values: &[f64]) -> Vec<bool> {
        match *self {
            OutlierRule::None => vec![false; values.len()],
            OutlierRule::Absolute { threshold } => {
                values.iter().map(|v| v.abs() > threshold).collect()
            }
            OutlierRule::Iqr { factor } => {
                if values.is_empty() {
                    return Vec::new();
                }
                let mut sorted = values.to_vec();
                sorted.sort_by(f64::total_cmp);
                let q1 = quantile(&sorted, 0.25);
                let q3 = quantile(&sorted, 0.75);
                let iqr = q3 - q1;
                let (lo, hi) = (q1 - factor * iqr, q3 + factor * iqr);
                values.iter().map(|&v| v < lo || v > hi).collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YearVolumeChange {
    pub year: i32,
    /// Countries with a volume in both this year and the previous one.
    pub countries: usize,
    pub avg_change: f64,
    /// `None` when every country had a zero previous-year volume.
    pub avg_pct_change: Option<f64>,
    pub avg_pct_change_excl_outliers: Option<f64>,
    pub zero_denominator_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outlier {
    pub country: String,
    pub year: i32,
    pub pct_change: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VolumeSeries {
    pub per_country_volume: BTreeMap<(String, i32), f64>,
    pub changes: BTreeMap<i32, YearVolumeChange>,
    pub outliers: Vec<Outlier>,
}

/// Streaming per-reporter volume aggregation.
#[derive(Debug, Clone)]
pub struct VolumeAccumulator {
    year_range: YearRange,
    volume: HashMap<String, Vec<Option<f64>>>,
}

impl VolumeAccumulator {
    pub fn new(year_range: YearRange) -> Self {
        Self {
            year_range,
            volume: HashMap::new(),
        }
    }

    /// Adds the record's exports plus imports to its reporter's volume.
    pub fn observe(&mut self, record: &TradeRecord) {
        let Some(offset) = self.year_range.offset(record.year) else {
            return;
        };
        let years = match self.volume.get_mut(record.reporter.as_str()) {
            Some(v) => v,
            None => self
                .volume
                .entry(record.reporter.clone())
                .or_insert_with(|| vec![None; self.year_range.len()]),
        };
        *years[offset].get_or_insert(0.0) += record.total_value();
    }

    pub fn finish(self, rule: OutlierRule) -> Result<VolumeSeries> {
        if self.year_range.len() < 2 {
            return Err(Error::InvalidConfig(
                "volume series needs a range of at least two years".into(),
            ));
        }
        let countries: BTreeMap<String, Vec<Option<f64>>> = self.volume.into_iter().collect();
        let mut per_country_volume = BTreeMap::new();
        for (c, years) in &countries {
            for (y, v) in self.year_range.iter().zip(years) {
                if let Some(v) = v {
                    per_country_volume.insert((c.clone(), y), *v);
                }
            }
        }

        let mut changes = BTreeMap::new();
        let mut outliers = Vec::new();
        for (offset, year) in self.year_range.iter().enumerate().skip(1) {
            let mut deltas = Vec::new();
            let mut pcts: Vec<(&str, f64)> = Vec::new();
            let mut zero_den = 0;
            for (c, years) in &countries {
                let (Some(prev), Some(cur)) = (years[offset - 1], years[offset]) else {
                    continue;
                };
                deltas.push(cur - prev);
                if prev > 0.0 {
                    pcts.push((c, (cur - prev) / prev));
                } else {
                    zero_den += 1;
                }
            }
            if deltas.is_empty() {
                continue;
            }
            let values: Vec<f64> = pcts.iter().map(|(_, p)| *p).collect();
            let flags = rule.flag(&values);
            let mean = |xs: &mut dyn Iterator<Item = f64>| -> Option<f64> {
                let (sum, n) = xs.fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
                (n > 0).then(|| sum / n as f64)
            };
            let avg_pct = mean(&mut values.iter().copied());
            let avg_excl = mean(
                &mut values
                    .iter()
                    .zip(&flags)
                    .filter(|(_, f)| !**f)
                    .map(|(v, _)| *v),
            );
            for ((c, p), f) in pcts.iter().zip(&flags) {
                if *f {
                    outliers.push(Outlier {
                        country: c.to_string(),
                        year,
                        pct_change: *p,
                    });
                }
            }
            changes.insert(
                year,
                YearVolumeChange {
                    year,
                    countries: deltas.len(),
                    avg_change: deltas.iter().sum::<f64>() / deltas.len() as f64,
                    avg_pct_change: avg_pct,
                    avg_pct_change_excl_outliers: avg_excl,
                    zero_denominator_count: zero_den,
                },
            );
        }
        if changes.is_empty() {
            return Err(Error::NoConsecutiveYears);
        }
        outliers.sort_by(|a, b| (&a.country, a.year).cmp(&(&b.country, b.year)));
        Ok(VolumeSeries {
            per_country_volume,
            changes,
            outliers,
        })
    }
}

pub fn volume_series<'a, I>(
    records: I,
    year_range: YearRange,
    rule: OutlierRule,
) -> Result<VolumeSeries>
where
    I: IntoIterator<Item = &'a TradeRecord>,
{
    let mut acc = VolumeAccumulator::new(year_range);
    for r in records {
        acc.observe(r);
    }
    acc.finish(rule)
}
