#ifndef PPFORGE_H
#define PPFORGE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define PPF_MODE_DIRECT 0

#define PPF_MODE_COMPOSITIONAL 1

#define PPF_SCHEDULE_ROUND_ROBIN 0

#define PPF_SCHEDULE_SEEDED_RANDOM 1

#define PPF_SCHEDULE_PARALLEL 2

/**
 * Result of every fallible call. Non-zero values mirror the CLI exit
 * codes; the message behind a failure is available from `ppf_last_error`.
 */
typedef enum {
  PPF_STATUS_OK = 0,
  PPF_STATUS_PARSE = 1,
  PPF_STATUS_VALIDATION = 2,
  PPF_STATUS_BUDGET = 3,
  PPF_STATUS_ORACLE_LIMIT = 4,
  PPF_STATUS_NULL_ARG = 5,
  PPF_STATUS_UTF8 = 6,
  PPF_STATUS_PANIC = 7,
} PpfStatus;

/**
 * Opaque handle to a parsed, validated graph.
 */
typedef struct PpfGraph PpfGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parse edge-list JSON or the DOT subset (sniffed) and validate it. On
 * success `*out` owns the handle; free it with `ppf_graph_free`.
 */
PpfStatus ppf_graph_parse(const char *text, PpfGraph **out);

void ppf_graph_free(PpfGraph *g);

/**
 * Vertex count, or 0 for a null handle.
 */
uint32_t ppf_graph_vertex_count(const PpfGraph *g);

/**
 * Arc count, or 0 for a null handle.
 */
uint32_t ppf_graph_arc_count(const PpfGraph *g);

/**
 * Hex SHA-256 digest of the graph's canonical form.
 */
PpfStatus ppf_graph_digest(const PpfGraph *g, char **out);

/**
 * Prime path report as JSON, shaped exactly like the CLI output. `mode`
 * and `schedule` take the `PPF_MODE_*` / `PPF_SCHEDULE_*` constants; the
 * seed feeds the seeded-random schedule and `workers` the parallel one.
 */
PpfStatus ppf_prime_paths_json(const PpfGraph *g,
                               uint32_t mode,
                               uint32_t schedule,
                               uint64_t seed,
                               uint32_t workers,
                               char **out);

/**
 * Covering test paths as JSON (direct mode, round-robin schedule).
 */
PpfStatus ppf_test_paths_json(const PpfGraph *g, char **out);

/**
 * Structural metrics as JSON.
 */
PpfStatus ppf_metrics_json(const PpfGraph *g, char **out);

/**
 * Component decomposition as JSON.
 */
PpfStatus ppf_scc_json(const PpfGraph *g, char **out);

/**
 * Message for the most recent failure on this thread, or null. The caller
 * owns the string.
 */
char *ppf_last_error(void);

/**
 * Free a string returned by any `ppf_*` function.
 */
void ppf_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PPFORGE_H */
