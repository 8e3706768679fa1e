use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::analysis::OutlierRule;
use crate::error::{Error, Result};
use crate::ingest::{ColumnMap, FormatConfig, ANALYZED_SECTORS, OTHER_SECTOR};
use crate::years::YearRange;

/// Fully resolved settings for one pipeline run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub records_path: PathBuf,
    pub taxonomy_path: PathBuf,
    pub gdp_path: PathBuf,
    pub year_range: YearRange,
    /// Years used for the GDP correlation; defaults to `year_range`.
    pub correlation_years: YearRange,
    pub sectors: Vec<String>,
    pub min_edge_value: f64,
    pub outlier_rule: OutlierRule,
    pub delimiter: u8,
    pub columns: ColumnMap,
    pub output_dir: PathBuf,
    pub cache_dir: PathBuf,
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn format(&self) -> FormatConfig {
        FormatConfig {
            delimiter: self.delimiter,
            columns: self.columns.clone(),
            year_range: self.year_range,
        }
    }

    pub fn years(&self) -> Vec<i32> {
        self.year_range.iter().collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.sectors.is_empty() {
            return Err(Error::InvalidConfig("no sectors selected".into()));
        }
        if !(self.min_edge_value.is_finite() && self.min_edge_value >= 0.0) {
            return Err(Error::InvalidConfig(
                "min-edge-value must be a non-negative number".into(),
            ));
        }
        if self.threads == Some(0) {
            return Err(Error::InvalidConfig("threads must be at least 1".into()));
        }
        let paths = [
            &self.records_path,
            &self.taxonomy_path,
            &self.gdp_path,
            &self.output_dir,
            &self.cache_dir,
        ];
        for (i, a) in paths.iter().enumerate() {
            for b in &paths[i + 1..] {
                if a == b {
                    return Err(Error::InvalidConfig(format!(
                        "path {} is used twice",
                        a.display()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Unresolved settings as read from a config file or command-line flags.
/// Keys mirror the long flag names.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    pub records: Option<PathBuf>,
    pub taxonomy: Option<PathBuf>,
    pub gdp: Option<PathBuf>,
    pub years: Option<YearRange>,
    pub corr_years: Option<YearRange>,
    pub sectors: Option<Vec<String>>,
    pub min_edge_value: Option<f64>,
    pub include_other: Option<bool>,
    pub outlier_rule: Option<OutlierRule>,
    pub delimiter: Option<u8>,
    pub columns: BTreeMap<String, String>,
    pub out: Option<PathBuf>,
    pub cache: Option<PathBuf>,
    pub threads: Option<usize>,
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(Error::InvalidConfig(format!(
            "{key}: expected a boolean, got `{v}`"
        ))),
    }
}

pub fn parse_delimiter(v: &str) -> Result<u8> {
    match v {
        "\\t" | "tab" => Ok(b'\t'),
        s if s.len() == 1 && s.is_ascii() => Ok(s.as_bytes()[0]),
        _ => Err(Error::InvalidConfig(format!(
            "delimiter must be a single ASCII character, got `{v}`"
        ))),
    }
}

pub fn parse_sector_list(v: &str) -> Vec<String> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

impl RawConfig {
    /// Parses `key = value` lines. `#` starts a comment; relative paths are
    /// resolved against the file's directory.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut cfg = RawConfig::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::InvalidConfig(format!("config line {}: expected key = value", i + 1))
            })?;
            cfg.set(key.trim(), value.trim(), base_dir)?;
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::NotFound {
                what: "config",
                path: path.to_path_buf(),
            },
            _ => Error::Io(e),
        })?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::parse(&text, base)
    }

    fn set(&mut self, key: &str, value: &str, base: &Path) -> Result<()> {
        let path = || base.join(value);
        let num_err = |what: &str| Error::InvalidConfig(format!("{key}: invalid {what} `{value}`"));
        match key {
            "records" => self.records = Some(path()),
            "taxonomy" => self.taxonomy = Some(path()),
            "gdp" => self.gdp = Some(path()),
            "out" => self.out = Some(path()),
            "cache" => self.cache = Some(path()),
            "years" => self.years = Some(value.parse()?),
            "corr-years" => self.corr_years = Some(value.parse()?),
            "sectors" => self.sectors = Some(parse_sector_list(value)),
            "min-edge-value" => {
                self.min_edge_value = Some(value.parse().map_err(|_| num_err("number"))?)
            }
            "include-other" => self.include_other = Some(parse_bool(key, value)?),
            "outlier-rule" => self.outlier_rule = Some(value.parse()?),
            "delimiter" => self.delimiter = Some(parse_delimiter(value)?),
            "threads" => self.threads = Some(value.parse().map_err(|_| num_err("count"))?),
            k if k.starts_with("column.") => {
                self.columns
                    .insert(k["column.".len()..].to_string(), value.to_string());
            }
            other => {
                return Err(Error::InvalidConfig(format!(
                    "unknown config key `{other}`"
                )));
            }
        }
        Ok(())
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overridden_by(mut self, over: RawConfig) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if over.$f.is_some() { self.$f = over.$f; } )* };
        }
        take!(
            records,
            taxonomy,
            gdp,
            years,
            corr_years,
            sectors,
            min_edge_value,
            include_other,
            outlier_rule,
            delimiter,
            out,
            cache,
            threads
        );
        self.columns.extend(over.columns);
        self
    }

    pub fn resolve(self) -> Result<RunConfig> {
        let required = |v: Option<PathBuf>, name: &str| {
            v.ok_or_else(|| Error::InvalidConfig(format!("--{name} is required")))
        };
        let year_range = self.years.unwrap_or_default();
        let mut sectors = self
            .sectors
            .unwrap_or_else(|| ANALYZED_SECTORS.iter().map(|s| s.to_string()).collect());
        if self.include_other.unwrap_or(false) && !sectors.iter().any(|s| s == OTHER_SECTOR) {
            sectors.push(OTHER_SECTOR.to_string());
        }
        let mut columns = ColumnMap::default();
        for (logical, header) in &self.columns {
            columns.set(logical, header)?;
        }
        let cfg = RunConfig {
            records_path: required(self.records, "records")?,
            taxonomy_path: required(self.taxonomy, "taxonomy")?,
            gdp_path: required(self.gdp, "gdp")?,
            year_range,
            correlation_years: self.corr_years.unwrap_or(year_range),
            sectors,
            min_edge_value: self.min_edge_value.unwrap_or(0.0),
            outlier_rule: self.outlier_rule.unwrap_or_default(),
            delimiter: self.delimiter.unwrap_or(b','),
            columns,
            output_dir: self.out.unwrap_or_else(|| PathBuf::from("out")),
            cache_dir: self
                .cache
                .unwrap_or_else(|| PathBuf::from(".tradenet-cache")),
            threads: self.threads,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
