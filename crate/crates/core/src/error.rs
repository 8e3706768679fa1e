use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} not found: {}", path.display())]
    NotFound { what: &'static str, path: PathBuf },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("missing required column `{0}`")]
    MissingColumn(String),

    #[error("product {product} maps to both `{first}` and `{second}`")]
    TaxonomyConflict {
        product: String,
        first: String,
        second: String,
    },

    #[error("line {line}: unknown sector `{name}`")]
    UnknownSector { line: u64, name: String },

    #[error("line {line}: {reason}")]
    MalformedInput { line: u64, reason: String },

    #[error("gdp series has a gap between {before} and {after}")]
    GdpGap { before: i32, after: i32 },

    #[error("gdp value for {year} is not strictly positive")]
    GdpNonPositive { year: i32 },

    #[error("gdp year {0} appears more than once")]
    GdpDuplicate(i32),

    #[error("no records to filter")]
    EmptyRecords,

    #[error("node {node} is not in the graph ({node_count} nodes)")]
    NodeOutOfRange { node: usize, node_count: usize },

    #[error("self-loop on node {0}")]
    SelfLoop(usize),

    #[error("diameter is undefined for an empty graph")]
    EmptyGraph,

    #[error("series lengths differ ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(String),

    #[error("unknown sector `{0}`")]
    UnknownSeriesSector(String),

    #[error("unknown metric `{0}`")]
    UnknownMetric(String),

    #[error("no country has two consecutive years of trade volume")]
    NoConsecutiveYears,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("ingest stage has not been run for this configuration")]
    IngestRequired,

    #[error("build stage has not been run for this configuration")]
    BuildRequired,
}

impl Error {
    /// Stable token printed on the diagnostic stream when the CLI fails.
    pub fn reason(&self) -> &'static str {
        match self {
            Error::NotFound { what, .. } => match *what {
                "records" => "records_not_found",
                "taxonomy" => "taxonomy_not_found",
                "gdp" => "gdp_not_found",
                "config" => "config_not_found",
                _ => "not_found",
            },
            Error::Io(_) => "io_error",
            Error::Csv(_) => "csv_error",
            Error::Json(_) => "json_error",
            Error::MissingColumn(_) => "missing_column",
            Error::TaxonomyConflict { .. } => "taxonomy_conflict",
            Error::UnknownSector { .. } => "unknown_sector",
            Error::MalformedInput { .. } => "malformed_input",
            Error::GdpGap { .. } => "gdp_gap",
            Error::GdpNonPositive { .. } => "gdp_non_positive",
            Error::GdpDuplicate(_) => "gdp_duplicate",
            Error::EmptyRecords => "empty_records",
            Error::NodeOutOfRange { .. } => "node_out_of_range",
            Error::SelfLoop(_) => "self_loop",
            Error::EmptyGraph => "empty_graph",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::UndefinedCorrelation(_) => "undefined_correlation",
            Error::UnknownSeriesSector(_) => "unknown_sector",
            Error::UnknownMetric(_) => "unknown_metric",
            Error::NoConsecutiveYears => "no_consecutive_years",
            Error::InvalidConfig(_) => "invalid_config",
            Error::IngestRequired => "ingest_required",
            Error::BuildRequired => "build_required",
        }
    }
}
