use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tradenet::analysis::OutlierRule;
use tradenet::pipeline::config::{parse_delimiter, parse_sector_list};
use tradenet::pipeline::{self, CacheStatus, RawConfig, RunConfig};
use tradenet::{Error, Result, YearRange};

#[derive(Parser)]
#[command(
    name = "tradenet",
    version,
    about = "Per-sector trade network metrics and GDP correlation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate inputs, apply the full-coverage filter, cache filtered records.
    Ingest(Flags),
    /// Build one trade graph per (sector, year) from the ingest cache.
    Build(Flags),
    /// Compute metrics, correlations and volume tables from the graph cache.
    Report(Flags),
    /// Run ingest, build and report in sequence.
    All(Flags),
}

#[derive(Args, Clone)]
struct Flags {
    /// Key-value config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    records: Option<PathBuf>,
    #[arg(long)]
    taxonomy: Option<PathBuf>,
    #[arg(long)]
    gdp: Option<PathBuf>,
    /// Study years, inclusive, as FIRST:LAST.
    #[arg(long, value_parser = parse_years)]
    years: Option<YearRange>,
    /// Years used for the GDP correlation (defaults to --years).
    #[arg(long, value_parser = parse_years)]
    corr_years: Option<YearRange>,
    /// Comma-separated sector names.
    #[arg(long, num_args = 1.., value_delimiter = ',')]
    sectors: Option<Vec<String>>,
    #[arg(long)]
    min_edge_value: Option<f64>,
    #[arg(long)]
    include_other: bool,
    /// none, iqr:K or abs:T.
    #[arg(long, value_parser = parse_rule)]
    outlier_rule: Option<OutlierRule>,
    #[arg(long, value_parser = parse_delim)]
    delimiter: Option<u8>,
    /// Column remapping, LOGICAL=HEADER (e.g. reporter=location_code).
    #[arg(long = "column", value_parser = parse_column)]
    columns: Vec<(String, String)>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    cache: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
}

fn parse_years(s: &str) -> std::result::Result<YearRange, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_rule(s: &str) -> std::result::Result<OutlierRule, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_delim(s: &str) -> std::result::Result<u8, String> {
    parse_delimiter(s).map_err(|e| e.to_string())
}

fn parse_column(s: &str) -> std::result::Result<(String, String), String> {
    s.split_once('=')
        .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
        .ok_or_else(|| format!("expected LOGICAL=HEADER, got `{s}`"))
}

impl Flags {
    fn resolve(self) -> Result<RunConfig> {
        let base = match &self.config {
            Some(path) => RawConfig::from_file(path)?,
            None => RawConfig::default(),
        };
        let flags = RawConfig {
            records: self.records,
            taxonomy: self.taxonomy,
            gdp: self.gdp,
            years: self.years,
            corr_years: self.corr_years,
            sectors: self
                .sectors
                .map(|v| v.iter().flat_map(|s| parse_sector_list(s)).collect()),
            min_edge_value: self.min_edge_value,
            include_other: self.include_other.then_some(true),
            outlier_rule: self.outlier_rule,
            delimiter: self.delimiter,
            columns: self.columns.into_iter().collect(),
            out: self.out,
            cache: self.cache,
            threads: self.threads,
        };
        base.overridden_by(flags).resolve()
    }
}

fn status_note(status: CacheStatus) -> &'static str {
    match status {
        CacheStatus::Hit => " (cache hit)",
        CacheStatus::Computed => "",
    }
}

fn ingest(cfg: &RunConfig) -> Result<()> {
    let (s, status) = pipeline::run_ingest(cfg)?;
    println!(
        "ingest{}: {} records, {} rejected, {} cached",
        status_note(status),
        s.records,
        s.rejects,
        s.cached_records
    );
    println!(
        "retained {} of {} countries",
        s.retained,
        s.retained + s.dropped
    );
    Ok(())
}

fn build(cfg: &RunConfig) -> Result<()> {
    let (s, status) = pipeline::run_build(cfg)?;
    println!(
        "build{}: {} graphs, {} edges",
        status_note(status),
        s.graphs,
        s.edges
    );
    if s.unknown_products > 0 {
        println!(
            "skipped {} records with products missing from the taxonomy",
            s.unknown_products
        );
    }
    Ok(())
}

fn report(cfg: &RunConfig) -> Result<()> {
    let s = pipeline::run_report(cfg)?;
    println!(
        "report: {} metric rows, {} undefined correlations, {} volume outliers",
        s.metrics_rows, s.undefined_correlations, s.outliers
    );
    println!(
        "wrote {} files to {}",
        s.files.len(),
        cfg.output_dir.display()
    );
    Ok(())
}

type Stage = fn(&RunConfig) -> Result<()>;

fn run(cli: Cli) -> Result<()> {
    let (flags, stages): (Flags, &[Stage]) = match cli.command {
        Command::Ingest(f) => (f, &[ingest]),
        Command::Build(f) => (f, &[build]),
        Command::Report(f) => (f, &[report]),
        Command::All(f) => (f, &[ingest, build, report]),
    };
    let cfg = flags.resolve()?;
    for stage in stages {
        stage(&cfg)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}: {e}", e.reason());
            ExitCode::FAILURE
        }
    }
}
