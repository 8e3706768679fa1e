//! Staged pipeline: `ingest` → `build` → `report`, with a content-hashed
//! cache between stages.
//!
//! Cache layout under `cache_dir`:
//!
//! ```text
//! manifest.json
//! ingest/records.csv     normalized records whose reporter is retained
//! ingest/retained.csv
//! ingest/dropped.csv
//! ingest/rejects.csv
//! ingest/summary.json
//! graphs/<sector>/<year>.csv
//! ```

pub mod cache;
pub mod config;
pub mod report;

use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{correlate_all, CorrelationReport, VolumeAccumulator, VolumeSeries};
use crate::error::{Error, Result};
use crate::ingest::{
    load_gdp_series, load_taxonomy, parse_trade_records, CoverageAccumulator, FormatConfig,
    GdpSeries, RejectWriter, SectorSet, SectorTaxonomy, TradeRecord, HS_SECTORS,
};
use crate::metrics::{compute_metrics_row, Metric, MetricsRow};
use crate::netbuild::{NetworkBuilder, TradeGraph};

use cache::{atomic_write, sha256_file, sha256_files, CacheEntry, CacheManifest};
pub use config::{RawConfig, RunConfig};

const INGEST_KEY: &str = "ingest";
const BUILD_KEY: &str = "build";
const INGEST_FILES: [&str; 5] = [
    "ingest/records.csv",
    "ingest/retained.csv",
    "ingest/dropped.csv",
    "ingest/rejects.csv",
    "ingest/summary.json",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CacheStatus {
    Computed,
    Hit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestSummary {
    pub records: u64,
    pub rejects: u64,
    pub cached_records: u64,
    pub retained: usize,
    pub dropped: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildSummary {
    pub graphs: usize,
    pub edges: usize,
    pub unknown_products: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportSummary {
    pub metrics_rows: usize,
    pub undefined_correlations: usize,
    pub outliers: usize,
    pub files: Vec<PathBuf>,
}

fn open_input(path: &Path, what: &'static str) -> Result<BufReader<File>> {
    match File::open(path) {
        Ok(f) => Ok(BufReader::with_capacity(1 << 16, f)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Err(Error::NotFound {
            what,
            path: path.to_path_buf(),
        }),
        Err(e) => Err(e.into()),
    }
}

fn hash_input(path: &Path, what: &'static str) -> Result<String> {
    open_input(path, what)?;
    sha256_file(path)
}

/// Runs `f` on a dedicated thread pool when `threads` is set.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidConfig(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn allowed_sectors(cfg: &RunConfig) -> SectorSet {
    SectorSet::new(
        HS_SECTORS
            .iter()
            .map(|s| s.to_string())
            .chain(cfg.sectors.iter().cloned()),
    )
}

pub fn load_run_taxonomy(cfg: &RunConfig) -> Result<SectorTaxonomy> {
    load_taxonomy(
        open_input(&cfg.taxonomy_path, "taxonomy")?,
        &allowed_sectors(cfg),
    )
}

pub fn load_run_gdp(cfg: &RunConfig) -> Result<GdpSeries> {
    load_gdp_series(open_input(&cfg.gdp_path, "gdp")?)
}

fn ingest_params(cfg: &RunConfig) -> Result<BTreeMap<String, String>> {
    Ok(BTreeMap::from([
        (
            "records_sha256".into(),
            hash_input(&cfg.records_path, "records")?,
        ),
        ("years".into(), cfg.year_range.to_string()),
        ("delimiter".into(), (cfg.delimiter as char).to_string()),
        ("columns".into(), serde_json::to_string(&cfg.columns)?),
    ]))
}

fn build_params(cfg: &RunConfig, ingest_hash: &str) -> Result<BTreeMap<String, String>> {
    Ok(BTreeMap::from([
        ("ingest_hash".into(), ingest_hash.to_string()),
        (
            "taxonomy_sha256".into(),
            hash_input(&cfg.taxonomy_path, "taxonomy")?,
        ),
        ("sectors".into(), serde_json::to_string(&cfg.sectors)?),
        ("years".into(), cfg.year_range.to_string()),
        ("min_edge_value".into(), cfg.min_edge_value.to_string()),
    ]))
}

fn ingest_files() -> Vec<PathBuf> {
    INGEST_FILES.iter().map(PathBuf::from).collect()
}

fn graph_files(cfg: &RunConfig) -> Vec<PathBuf> {
    let mut sectors = cfg.sectors.clone();
    sectors.sort();
    sectors.dedup();
    sectors
        .iter()
        .flat_map(|s| {
            cfg.year_range
                .iter()
                .map(move |y| Path::new("graphs").join(s).join(format!("{y}.csv")))
        })
        .collect()
}

/// Entry is valid if its parameters match and its artifacts still hash to
/// the recorded digest.
fn verified<'m>(
    manifest: &'m CacheManifest,
    key: &str,
    params: &BTreeMap<String, String>,
    root: &Path,
    files: &[PathBuf],
) -> Option<&'m CacheEntry> {
    let entry = manifest.matching(key, params)?;
    match sha256_files(root, files) {
        Ok(h) if h == entry.hash => Some(entry),
        _ => None,
    }
}

fn write_country_list(path: &Path, countries: &BTreeSet<String>) -> Result<()> {
    atomic_write(path, |w| {
        writeln!(w, "country")?;
        for c in countries {
            writeln!(w, "{c}")?;
        }
        Ok(())
    })
}

fn read_country_list(path: &Path) -> Result<BTreeSet<String>> {
    let mut r = csv::Reader::from_reader(open_input(path, "cache")?);
    let mut out = BTreeSet::new();
    for row in r.records() {
        out.insert(row?[0].to_string());
    }
    Ok(out)
}

fn copy_to_output(cache_dir: &Path, output_dir: &Path, name: &str) -> Result<()> {
    let mut src = fs::File::open(cache_dir.join("ingest").join(name))?;
    atomic_write(&output_dir.join(name), |w| {
        io::copy(&mut src, w)?;
        Ok(())
    })
}

/// Streams the cached records through `f`.
fn for_each_cached_record(cfg: &RunConfig, mut f: impl FnMut(&TradeRecord)) -> Result<()> {
    let input = open_input(&cfg.cache_dir.join("ingest/records.csv"), "cache")?;
    let format = FormatConfig {
        year_range: cfg.year_range,
        ..FormatConfig::default()
    };
    let mut malformed = Vec::new();
    parse_trade_records(input, &format)?.drive(&mut malformed, |r| {
        f(&r);
        Ok(())
    })?;
    if let Some(bad) = malformed.first() {
        return Err(Error::MalformedInput {
            line: bad.line,
            reason: format!("corrupt record cache: {}", bad.reason),
        });
    }
    Ok(())
}

/// Validates inputs, applies the full-coverage filter and caches the
/// filtered records.
pub fn run_ingest(cfg: &RunConfig) -> Result<(IngestSummary, CacheStatus)> {
    cfg.validate()?;
    // Fail early on broken auxiliary inputs.
    load_run_taxonomy(cfg)?;
    load_run_gdp(cfg)?;
    let params = ingest_params(cfg)?;
    let mut manifest = CacheManifest::load(&cfg.cache_dir)?;

    let status = if verified(
        &manifest,
        INGEST_KEY,
        &params,
        &cfg.cache_dir,
        &ingest_files(),
    )
    .is_some()
    {
        CacheStatus::Hit
    } else {
        ingest_uncached(cfg)?;
        manifest.entries.insert(
            INGEST_KEY.into(),
            CacheEntry {
                hash: sha256_files(&cfg.cache_dir, &ingest_files())?,
                params,
            },
        );
        manifest.entries.remove(BUILD_KEY);
        manifest.save(&cfg.cache_dir)?;
        CacheStatus::Computed
    };

    for name in ["retained.csv", "dropped.csv", "rejects.csv"] {
        copy_to_output(&cfg.cache_dir, &cfg.output_dir, name)?;
    }
    let summary: IngestSummary =
        serde_json::from_slice(&fs::read(cfg.cache_dir.join("ingest/summary.json"))?)?;
    Ok((summary, status))
}

fn ingest_uncached(cfg: &RunConfig) -> Result<()> {
    let dir = cfg.cache_dir.join("ingest");
    let format = cfg.format();

    let mut coverage = CoverageAccumulator::new(cfg.year_range);
    let mut counts = (0, 0);
    atomic_write(&dir.join("rejects.csv"), |w| {
        let mut sink = RejectWriter::new(w)?;
        let stream = parse_trade_records(open_input(&cfg.records_path, "records")?, &format)?;
        counts = stream.drive(&mut sink, |r| {
            coverage.observe(&r);
            Ok(())
        })?;
        sink.finish()?;
        Ok(())
    })?;
    let result = coverage.finish()?;

    let mut cached = 0u64;
    atomic_write(&dir.join("records.csv"), |w| {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "year",
            "reporter",
            "partner",
            "product",
            "export_value",
            "import_value",
        ])?;
        let stream = parse_trade_records(open_input(&cfg.records_path, "records")?, &format)?;
        let mut ignore = Vec::new();
        stream.drive(&mut ignore, |r| {
            if result.retained.contains(&r.reporter) {
                cached += 1;
                out.write_record([
                    r.year.to_string(),
                    r.reporter,
                    r.partner,
                    r.product.to_string(),
                    r.export_value.to_string(),
                    r.import_value.to_string(),
                ])?;
            }
            Ok(())
        })?;
        out.flush()?;
        Ok(())
    })?;

    write_country_list(&dir.join("retained.csv"), &result.retained)?;
    write_country_list(&dir.join("dropped.csv"), &result.dropped)?;
    let summary = IngestSummary {
        records: counts.0,
        rejects: counts.1,
        cached_records: cached,
        retained: result.retained.len(),
        dropped: result.dropped.len(),
    };
    atomic_write(&dir.join("summary.json"), |w| {
        serde_json::to_writer_pretty(&mut *w, &summary)?;
        Ok(w.write_all(b"\n")?)
    })
}

fn require_ingest(cfg: &RunConfig, manifest: &CacheManifest) -> Result<String> {
    let params = ingest_params(cfg)?;
    verified(
        manifest,
        INGEST_KEY,
        &params,
        &cfg.cache_dir,
        &ingest_files(),
    )
    .map(|e| e.hash.clone())
    .ok_or(Error::IngestRequired)
}

/// Builds and caches one edge-list dump per `(sector, year)`.
pub fn run_build(cfg: &RunConfig) -> Result<(BuildSummary, CacheStatus)> {
    cfg.validate()?;
    let mut manifest = CacheManifest::load(&cfg.cache_dir)?;
    let ingest_hash = require_ingest(cfg, &manifest)?;
    let params = build_params(cfg, &ingest_hash)?;
    let files = graph_files(cfg);

    if verified(&manifest, BUILD_KEY, &params, &cfg.cache_dir, &files).is_some() {
        let edges = load_graphs(cfg)?.iter().map(TradeGraph::edge_count).sum();
        let summary = BuildSummary {
            graphs: files.len(),
            edges,
            unknown_products: 0,
        };
        return Ok((summary, CacheStatus::Hit));
    }

    let taxonomy = load_run_taxonomy(cfg)?;
    let retained = read_country_list(&cfg.cache_dir.join("ingest/retained.csv"))?;
    let mut builder = NetworkBuilder::new(
        &taxonomy,
        &cfg.sectors,
        &cfg.years(),
        &retained,
        cfg.min_edge_value,
    )?;
    for_each_cached_record(cfg, |r| builder.observe(r))?;
    let outcome = with_threads(cfg.threads, || builder.finish())?;

    let graph_dir = cfg.cache_dir.join("graphs");
    manifest.entries.remove(BUILD_KEY);
    manifest.save(&cfg.cache_dir)?;
    if graph_dir.exists() {
        fs::remove_dir_all(&graph_dir)?;
    }
    for ((sector, year), g) in &outcome.graphs {
        let path = graph_dir.join(sector).join(format!("{year}.csv"));
        atomic_write(&path, |w| g.write_edge_list(w))?;
    }
    manifest.entries.insert(
        BUILD_KEY.into(),
        CacheEntry {
            hash: sha256_files(&cfg.cache_dir, &files)?,
            params,
        },
    );
    manifest.save(&cfg.cache_dir)?;
    let summary = BuildSummary {
        graphs: outcome.graphs.len(),
        edges: outcome.graphs.values().map(TradeGraph::edge_count).sum(),
        unknown_products: outcome.stats.unknown_products,
    };
    Ok((summary, CacheStatus::Computed))
}

fn load_graphs(cfg: &RunConfig) -> Result<Vec<TradeGraph>> {
    let mut sectors = cfg.sectors.clone();
    sectors.sort();
    sectors.dedup();
    let cells: Vec<(String, i32)> = sectors
        .iter()
        .flat_map(|s| cfg.year_range.iter().map(move |y| (s.clone(), y)))
        .collect();
    cells
        .par_iter()
        .map(|(s, y)| {
            let path = cfg
                .cache_dir
                .join("graphs")
                .join(s)
                .join(format!("{y}.csv"));
            TradeGraph::read_edge_list(s, *y, open_input(&path, "cache")?)
        })
        .collect()
}

/// In-memory results of the report stage.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportData {
    pub metrics: Vec<MetricsRow>,
    pub correlations: CorrelationReport,
    pub volume: VolumeSeries,
}

pub fn compute_report(cfg: &RunConfig) -> Result<ReportData> {
    cfg.validate()?;
    let manifest = CacheManifest::load(&cfg.cache_dir)?;
    let ingest_hash = require_ingest(cfg, &manifest)?;
    let params = build_params(cfg, &ingest_hash)?;
    verified(
        &manifest,
        BUILD_KEY,
        &params,
        &cfg.cache_dir,
        &graph_files(cfg),
    )
    .ok_or(Error::BuildRequired)?;

    let gdp = load_run_gdp(cfg)?;
    let (metrics, volume) = with_threads(cfg.threads, || -> Result<_> {
        let graphs = load_graphs(cfg)?;
        let metrics: Vec<MetricsRow> = graphs.par_iter().map(compute_metrics_row).collect();
        let mut volume = VolumeAccumulator::new(cfg.year_range);
        for_each_cached_record(cfg, |r| volume.observe(r))?;
        Ok((metrics, volume.finish(cfg.outlier_rule)?))
    })??;
    let correlations = correlate_all(&metrics, &gdp, cfg.correlation_years);
    Ok(ReportData {
        metrics,
        correlations,
        volume,
    })
}

/// Writes every report table into `output_dir`.
pub fn run_report(cfg: &RunConfig) -> Result<ReportSummary> {
    let data = compute_report(cfg)?;
    let out = &cfg.output_dir;
    let mut files = Vec::new();
    let mut emit = |name: String, body: &dyn Fn(&mut dyn Write) -> Result<()>| -> Result<()> {
        let path = out.join(&name);
        atomic_write(&path, |w| body(w))?;
        files.push(path);
        Ok(())
    };
    emit("metrics.csv".into(), &|w| {
        report::write_metrics_csv(&data.metrics, w)
    })?;
    emit("correlations.csv".into(), &|w| {
        report::write_correlation_csv(&data.correlations, w)
    })?;
    emit("correlations.json".into(), &|w| {
        report::write_correlation_json(&data.correlations, w)
    })?;
    emit("volume.csv".into(), &|w| {
        report::write_volume_csv(&data.volume, w)
    })?;
    emit("volume_outliers.csv".into(), &|w| {
        report::write_outliers_csv(&data.volume, w)
    })?;
    for metric in Metric::ALL {
        emit(report::figure_file_name(metric), &|w| {
            report::write_figure_csv(&data.metrics, metric, cfg.year_range, w)
        })?;
    }
    let undefined_correlations = data
        .correlations
        .rows
        .values()
        .flat_map(|cells| cells.values())
        .filter(|c| c.r().is_none())
        .count();
    Ok(ReportSummary {
        metrics_rows: data.metrics.len(),
        undefined_correlations,
        outliers: data.volume.outliers.len(),
        files,
    })
}
