//! Streaming ingestion of bilateral trade records and the auxiliary
//! inputs (sector taxonomy, GDP series), plus the full-coverage country
//! filter.

mod coverage;
mod gdp;
mod records;
mod taxonomy;

pub use coverage::{filter_full_coverage_countries, CoverageAccumulator, CoverageFilterResult};
pub use gdp::{load_gdp_series, GdpSeries};
pub use records::{
    normalize_country, parse_trade_records, ColumnMap, FormatConfig, ProductCode, RecordStream,
    Reject, RejectSink, RejectWriter, RowOutcome, TradeRecord,
};
pub use taxonomy::{
    load_taxonomy, SectorSet, SectorTaxonomy, ANALYZED_SECTORS, HS_SECTORS, OTHER_SECTOR,
};
