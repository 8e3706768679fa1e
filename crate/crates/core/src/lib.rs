//! Per-sector international trade networks and their structural metrics.
//!
//! Bilateral trade records are streamed and validated ([`ingest`]), turned
//! into one undirected country graph per sector and year ([`netbuild`]),
//! measured ([`metrics`]), and the resulting yearly series are correlated
//! with global GDP alongside trade-volume change statistics ([`analysis`]).
//! [`pipeline`] strings the stages together behind a content-hashed cache.

pub mod analysis;
pub mod error;
pub mod fmt;
pub mod graph;
pub mod ingest;
pub mod metrics;
pub mod netbuild;
pub mod pipeline;
pub mod years;

pub use error::{Error, Result};
pub use graph::UndirectedGraph;
pub use years::YearRange;
