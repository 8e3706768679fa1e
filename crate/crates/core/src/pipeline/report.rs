//! Serializers for the report-stage tables.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::analysis::{CorrelationCell, CorrelationReport, VolumeSeries};
use crate::error::Result;
use crate::fmt::{fixed3, real};
use crate::metrics::{Metric, MetricsRow};
use crate::years::YearRange;

pub const METRICS_HEADER: [&str; 9] = [
    "sector",
    "year",
    "nodes",
    "avg_degree",
    "avg_clustering",
    "density",
    "triangles",
    "diameter",
    "components",
];

fn opt(v: Option<f64>, f: fn(f64) -> String) -> String {
    v.map(f).unwrap_or_default()
}

/// Metrics table sorted by `(sector, year)`.
pub fn write_metrics_csv<W: Write>(rows: &[MetricsRow], out: W) -> Result<()> {
    let mut sorted: Vec<&MetricsRow> = rows.iter().collect();
    sorted.sort_by(|a, b| (&a.sector, a.year).cmp(&(&b.sector, b.year)));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(METRICS_HEADER)?;
    for r in sorted {
        w.write_record([
            r.sector.clone(),
            r.year.to_string(),
            r.node_count.to_string(),
            real(r.average_degree),
            real(r.average_clustering),
            real(r.density),
            r.triangle_count.to_string(),
            r.diameter.map(|d| d.to_string()).unwrap_or_default(),
            r.component_count.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Table-shaped correlation CSV; undefined cells are empty.
pub fn write_correlation_csv<W: Write>(report: &CorrelationReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["sector".to_string()];
    header.extend(Metric::ALL.iter().map(|m| format!("{}_r", m.key())));
    w.write_record(&header)?;
    for (sector, cells) in &report.rows {
        let mut rec = vec![sector.clone()];
        for m in Metric::ALL {
            rec.push(opt(cells.get(&m).and_then(CorrelationCell::r), fixed3));
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct CorrelationJson<'a> {
    year_range: YearRange,
    sectors: BTreeMap<&'a str, BTreeMap<&'static str, &'a CorrelationCell>>,
}

/// Full-precision correlation report, including reasons for undefined cells.
pub fn write_correlation_json<W: Write>(report: &CorrelationReport, mut out: W) -> Result<()> {
    let doc = CorrelationJson {
        year_range: report.year_range,
        sectors: report
            .rows
            .iter()
            .map(|(s, cells)| {
                (
                    s.as_str(),
                    cells.iter().map(|(m, c)| (m.key(), c)).collect(),
                )
            })
            .collect(),
    };
    serde_json::to_writer_pretty(&mut out, &doc)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn write_volume_csv<W: Write>(series: &VolumeSeries, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "year",
        "avg_change",
        "avg_pct_change",
        "avg_pct_change_excl_outliers",
        "zero_denominator_count",
    ])?;
    for c in series.changes.values() {
        w.write_record([
            c.year.to_string(),
            real(c.avg_change),
            opt(c.avg_pct_change, real),
            opt(c.avg_pct_change_excl_outliers, real),
            c.zero_denominator_count.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_outliers_csv<W: Write>(series: &VolumeSeries, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["country", "year", "pct_change"])?;
    for o in &series.outliers {
        w.write_record([o.country.clone(), o.year.to_string(), real(o.pct_change)])?;
    }
    w.flush()?;
    Ok(())
}

/// Plot data for one metric: a `year` column then one column per sector.
pub fn write_figure_csv<W: Write>(
    rows: &[MetricsRow],
    metric: Metric,
    years: YearRange,
    out: W,
) -> Result<()> {
    let mut table: BTreeMap<&str, BTreeMap<i32, Option<f64>>> = BTreeMap::new();
    for r in rows {
        table
            .entry(&r.sector)
            .or_default()
            .insert(r.year, r.value(metric));
    }
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["year"];
    header.extend(table.keys().copied());
    w.write_record(&header)?;
    for year in years.iter() {
        let mut rec = vec![year.to_string()];
        for by_year in table.values() {
            rec.push(opt(by_year.get(&year).copied().flatten(), real));
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn figure_file_name(metric: Metric) -> String {
    format!("fig_{}.csv", metric.key())
}
