//! C ABI over the tradenet library.
//!
//! Objects are exposed as opaque handles that must be released with the
//! matching `*_free` function. Every fallible call returns a [`TnStatus`];
//! on failure the reason token and message of the last error on the calling
//! thread can be read with [`tn_last_error_reason`] and
//! [`tn_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use tradenet::analysis::pearson;
use tradenet::metrics::{local_clustering, GraphMetrics};
use tradenet::pipeline::{self, RawConfig, RunConfig};
use tradenet::{Error, UndirectedGraph};

/// Result codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NodeOutOfRange = 3,
    SelfLoop = 4,
    EmptyGraph = 5,
    LengthMismatch = 6,
    UndefinedCorrelation = 7,
    NotFound = 8,
    Io = 9,
    InvalidConfig = 10,
    MalformedInput = 11,
    IngestRequired = 12,
    BuildRequired = 13,
    Panic = 14,
}

/// Pipeline stage selector for [`tn_run_stage`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TnStage {
    Ingest = 0,
    Build = 1,
    Report = 2,
    All = 3,
}

/// The six graph attributes plus bookkeeping counts.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TnMetrics {
    pub node_count: usize,
    pub edge_count: usize,
    pub average_degree: f64,
    pub average_clustering: f64,
    pub density: f64,
    pub triangle_count: u64,
    /// Valid only when `has_diameter` is nonzero.
    pub diameter: u32,
    pub has_diameter: u8,
    pub component_count: usize,
}

/// Opaque graph handle.
pub struct TnGraph(UndirectedGraph);

/// Opaque resolved run configuration.
pub struct TnConfig(RunConfig);

struct LastError {
    reason: Vec<u8>,
    message: Vec<u8>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<LastError>> = const { RefCell::new(None) };
}

fn set_error(reason: &str, message: String) {
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = Some(LastError {
            reason: reason.as_bytes().to_vec(),
            message: message.into_bytes(),
        })
    });
}

fn status_of(err: &Error) -> TnStatus {
    match err {
        Error::NodeOutOfRange { .. } => TnStatus::NodeOutOfRange,
        Error::SelfLoop(_) => TnStatus::SelfLoop,
        Error::EmptyGraph => TnStatus::EmptyGraph,
        Error::LengthMismatch { .. } => TnStatus::LengthMismatch,
        Error::UndefinedCorrelation(_) => TnStatus::UndefinedCorrelation,
        Error::NotFound { .. } => TnStatus::NotFound,
        Error::Io(_) => TnStatus::Io,
        Error::InvalidConfig(_) => TnStatus::InvalidConfig,
        Error::IngestRequired => TnStatus::IngestRequired,
        Error::BuildRequired => TnStatus::BuildRequired,
        Error::Csv(_)
        | Error::Json(_)
        | Error::MissingColumn(_)
        | Error::TaxonomyConflict { .. }
        | Error::UnknownSector { .. }
        | Error::MalformedInput { .. }
        | Error::GdpGap { .. }
        | Error::GdpNonPositive { .. }
        | Error::GdpDuplicate(_)
        | Error::EmptyRecords
        | Error::NoConsecutiveYears => TnStatus::MalformedInput,
        Error::UnknownSeriesSector(_) | Error::UnknownMetric(_) => TnStatus::InvalidArgument,
    }
}

fn fail(err: Error) -> TnStatus {
    let status = status_of(&err);
    set_error(err.reason(), err.to_string());
    status
}

fn null(what: &str) -> TnStatus {
    set_error("null_pointer", format!("{what} is null"));
    TnStatus::NullPointer
}

fn guard(f: impl FnOnce() -> TnStatus) -> TnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("panic", "internal panic".into());
            TnStatus::Panic
        }
    }
}

/// Copies `bytes` plus a NUL into `buf` (truncating). Returns the full
/// length including the NUL.
unsafe fn copy_out(bytes: &[u8], buf: *mut c_char, len: usize) -> usize {
    if !buf.is_null() && len > 0 {
        let n = bytes.len().min(len - 1);
        ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, n);
        *buf.add(n) = 0;
    }
    bytes.len() + 1
}

/// Writes the reason token of the last error into `buf`; returns the buffer
/// size needed, or 0 if no error has been recorded on this thread.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn tn_last_error_reason(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(e) => copy_out(&e.reason, buf, len),
        None => 0,
    })
}

/// Like [`tn_last_error_reason`] for the human-readable message.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn tn_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(e) => copy_out(&e.message, buf, len),
        None => 0,
    })
}

/// Creates a graph with `node_count` isolated nodes.
#[no_mangle]
pub extern "C" fn tn_graph_new(node_count: usize) -> *mut TnGraph {
    Box::into_raw(Box::new(TnGraph(UndirectedGraph::new(node_count))))
}

/// # Safety
/// `graph` must be null or a handle from [`tn_graph_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tn_graph_free(graph: *mut TnGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Adds undirected edge `{a, b}`. Repeated edges are ignored.
///
/// # Safety
/// `graph` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tn_graph_add_edge(graph: *mut TnGraph, a: usize, b: usize) -> TnStatus {
    guard(|| {
        let Some(g) = graph.as_mut() else {
            return null("graph");
        };
        match g.0.add_edge(a, b) {
            Ok(_) => TnStatus::Ok,
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tn_graph_node_count(graph: *const TnGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.node_count())
}

/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tn_graph_edge_count(graph: *const TnGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.edge_count())
}

/// Computes all graph attributes into `out`.
///
/// # Safety
/// `graph` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tn_graph_metrics(graph: *const TnGraph, out: *mut TnMetrics) -> TnStatus {
    guard(|| {
        let Some(g) = graph.as_ref() else {
            return null("graph");
        };
        if out.is_null() {
            return null("out");
        }
        let m = GraphMetrics::compute(&g.0);
        *out = TnMetrics {
            node_count: m.node_count,
            edge_count: m.edge_count,
            average_degree: m.average_degree,
            average_clustering: m.average_clustering,
            density: m.density,
            triangle_count: m.triangle_count,
            diameter: m.diameter.unwrap_or(0),
            has_diameter: m.diameter.is_some() as u8,
            component_count: m.component_count,
        };
        TnStatus::Ok
    })
}

/// Local clustering coefficient of node `v`.
///
/// # Safety
/// `graph` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tn_graph_local_clustering(
    graph: *const TnGraph,
    v: usize,
    out: *mut f64,
) -> TnStatus {
    guard(|| {
        let Some(g) = graph.as_ref() else {
            return null("graph");
        };
        if out.is_null() {
            return null("out");
        }
        match local_clustering(&g.0, v) {
            Ok(c) => {
                *out = c;
                TnStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Pearson correlation of two series of length `len`.
///
/// # Safety
/// `x` and `y` must be valid for `len` reads; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tn_pearson(
    x: *const f64,
    y: *const f64,
    len: usize,
    out: *mut f64,
) -> TnStatus {
    guard(|| {
        if x.is_null() || y.is_null() {
            return null("series");
        }
        if out.is_null() {
            return null("out");
        }
        let xs = std::slice::from_raw_parts(x, len);
        let ys = std::slice::from_raw_parts(y, len);
        match pearson(xs, ys) {
            Ok(r) => {
                *out = r;
                TnStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Reads a key-value config file and resolves it into a run configuration.
///
/// # Safety
/// `path` must be a NUL-terminated UTF-8 string; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tn_config_load(path: *const c_char, out: *mut *mut TnConfig) -> TnStatus {
    guard(|| {
        if path.is_null() {
            return null("path");
        }
        if out.is_null() {
            return null("out");
        }
        let Ok(path) = CStr::from_ptr(path).to_str() else {
            set_error("invalid_argument", "path is not valid UTF-8".into());
            return TnStatus::InvalidArgument;
        };
        match RawConfig::from_file(Path::new(path)).and_then(RawConfig::resolve) {
            Ok(cfg) => {
                *out = Box::into_raw(Box::new(TnConfig(cfg)));
                TnStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `config` must be null or a handle from [`tn_config_load`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tn_config_free(config: *mut TnConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Runs one pipeline stage (or all of them) with the given configuration.
///
/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn tn_run_stage(config: *const TnConfig, stage: TnStage) -> TnStatus {
    guard(|| {
        let Some(cfg) = config.as_ref() else {
            return null("config");
        };
        let cfg = &cfg.0;
        let run = || -> tradenet::Result<()> {
            if matches!(stage, TnStage::Ingest | TnStage::All) {
                pipeline::run_ingest(cfg)?;
            }
            if matches!(stage, TnStage::Build | TnStage::All) {
                pipeline::run_build(cfg)?;
            }
            if matches!(stage, TnStage::Report | TnStage::All) {
                pipeline::run_report(cfg)?;
            }
            Ok(())
        };
        match run() {
            Ok(()) => TnStatus::Ok,
            Err(e) => fail(e),
        }
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tn_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}
