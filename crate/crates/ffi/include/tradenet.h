#ifndef TRADENET_H
#define TRADENET_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Pipeline stage selector for [`tn_run_stage`].
typedef enum TnStage {
  TN_STAGE_INGEST = 0,
  TN_STAGE_BUILD = 1,
  TN_STAGE_REPORT = 2,
  TN_STAGE_ALL = 3,
} TnStage;

// Result codes returned by every fallible function.
typedef enum TnStatus {
  TN_STATUS_OK = 0,
  TN_STATUS_NULL_POINTER = 1,
  TN_STATUS_INVALID_ARGUMENT = 2,
  TN_STATUS_NODE_OUT_OF_RANGE = 3,
  TN_STATUS_SELF_LOOP = 4,
  TN_STATUS_EMPTY_GRAPH = 5,
  TN_STATUS_LENGTH_MISMATCH = 6,
  TN_STATUS_UNDEFINED_CORRELATION = 7,
  TN_STATUS_NOT_FOUND = 8,
  TN_STATUS_IO = 9,
  TN_STATUS_INVALID_CONFIG = 10,
  TN_STATUS_MALFORMED_INPUT = 11,
  TN_STATUS_INGEST_REQUIRED = 12,
  TN_STATUS_BUILD_REQUIRED = 13,
  TN_STATUS_PANIC = 14,
} TnStatus;

// Opaque resolved run configuration.
typedef struct TnConfig TnConfig;

// Opaque graph handle.
typedef struct TnGraph TnGraph;

// The six graph attributes plus bookkeeping counts.
typedef struct TnMetrics {
  size_t node_count;
  size_t edge_count;
  double average_degree;
  double average_clustering;
  double density;
  uint64_t triangle_count;
  // Valid only when `has_diameter` is nonzero.
  uint32_t diameter;
  uint8_t has_diameter;
  size_t component_count;
} TnMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Writes the reason token of the last error into `buf`; returns the buffer
// size needed, or 0 if no error has been recorded on this thread.
//
// # Safety
// `buf` must be null or valid for `len` bytes.
size_t tn_last_error_reason(char *buf, size_t len);

// Like [`tn_last_error_reason`] for the human-readable message.
//
// # Safety
// `buf` must be null or valid for `len` bytes.
size_t tn_last_error_message(char *buf, size_t len);

// Creates a graph with `node_count` isolated nodes.
struct TnGraph *tn_graph_new(size_t node_count);

// # Safety
// `graph` must be null or a handle from [`tn_graph_new`] not yet freed.
void tn_graph_free(struct TnGraph *graph);

// Adds undirected edge `{a, b}`. Repeated edges are ignored.
//
// # Safety
// `graph` must be a live handle.
enum TnStatus tn_graph_add_edge(struct TnGraph *graph, size_t a, size_t b);

// # Safety
// `graph` must be null or a live handle.
size_t tn_graph_node_count(const struct TnGraph *graph);

// # Safety
// `graph` must be null or a live handle.
size_t tn_graph_edge_count(const struct TnGraph *graph);

// Computes all graph attributes into `out`.
//
// # Safety
// `graph` must be a live handle and `out` valid for writes.
enum TnStatus tn_graph_metrics(const struct TnGraph *graph, struct TnMetrics *out);

// Local clustering coefficient of node `v`.
//
// # Safety
// `graph` must be a live handle and `out` valid for writes.
enum TnStatus tn_graph_local_clustering(const struct TnGraph *graph, size_t v, double *out);

// Pearson correlation of two series of length `len`.
//
// # Safety
// `x` and `y` must be valid for `len` reads; `out` valid for writes.
enum TnStatus tn_pearson(const double *x, const double *y, size_t len, double *out);

// Reads a key-value config file and resolves it into a run configuration.
//
// # Safety
// `path` must be a NUL-terminated UTF-8 string; `out` valid for writes.
enum TnStatus tn_config_load(const char *path, struct TnConfig **out);

// # Safety
// `config` must be null or a handle from [`tn_config_load`] not yet freed.
void tn_config_free(struct TnConfig *config);

// Runs one pipeline stage (or all of them) with the given configuration.
//
// # Safety
// `config` must be a live handle.
enum TnStatus tn_run_stage(const struct TnConfig *config, enum TnStage stage);

// Library version as a static NUL-terminated string.
const char *tn_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRADENET_H */
