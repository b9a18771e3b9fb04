#ifndef SINKLOCK_H
#define SINKLOCK_H

/* Generated by cbindgen from the sinklock-ffi crate; edit the Rust source instead. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Edge-count cap on exact enumeration, shared with the library.
 */
#define SL_ENUMERATION_EDGE_CAP 20

/**
 * Result of every fallible call. Zero is success.
 */
typedef enum sl_status {
  SL_OK = 0,
  /**
   * A required pointer argument was null.
   */
  SL_ERR_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  SL_ERR_UTF8 = 2,
  /**
   * A parameter was out of range or structurally invalid.
   */
  SL_ERR_INVALID_ARGUMENT = 3,
  /**
   * The instance is larger than a documented enumeration cap.
   */
  SL_ERR_CAP_EXCEEDED = 4,
  /**
   * The requested statistic has no closed form for this family.
   */
  SL_ERR_NO_CLOSED_FORM = 5,
  /**
   * A numeric iteration failed to converge.
   */
  SL_ERR_NUMERIC = 6,
  /**
   * The trace is malformed or inconsistent with its own header.
   */
  SL_ERR_TRACE = 7,
  /**
   * The trace is well-formed but breaks an engine protocol rule.
   */
  SL_ERR_PROTOCOL = 8,
  /**
   * JSON input failed to parse or JSON output failed to serialize.
   */
  SL_ERR_JSON = 9,
  /**
   * An underlying I/O operation failed.
   */
  SL_ERR_IO = 10,
  /**
   * The caller's buffer is smaller than `written` requires.
   */
  SL_ERR_BUFFER_TOO_SMALL = 11,
  /**
   * An internal invariant failed; the library caught a panic.
   */
  SL_ERR_INTERNAL = 12,
} sl_status;

/**
 * Statistic selector for closed forms and Monte Carlo estimation.
 */
typedef enum sl_statistic {
  /**
   * E[X], the expected number of sinks in one round.
   */
  SL_STAT_EXPECTED_SINKS = 0,
  /**
   * Pr[X > 0], the probability that a round grants anyone.
   */
  SL_STAT_PROB_POSITIVE = 1,
} sl_statistic;

/**
 * How a closed-form value relates to the true statistic.
 */
typedef enum sl_relation {
  /**
   * The value is the statistic, exactly.
   */
  SL_REL_EQUALS = 0,
  /**
   * The statistic is at least this value.
   */
  SL_REL_AT_LEAST = 1,
  /**
   * Asymptotic approximation; no error bound is claimed.
   */
  SL_REL_APPROXIMATELY = 2,
} sl_relation;

/**
 * An immutable conflict graph.
 */
typedef struct sl_graph sl_graph;

/**
 * One orientation of a graph's edges with its sinks precomputed.
 */
typedef struct sl_orientation sl_orientation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string; never freed.
 */
const char *sl_version(void);

/**
 * Message of the last failure on this thread, or an empty string.
 *
 * The pointer stays valid until the next failing call on the same thread;
 * copy it out before calling anything else. Never free it.
 */
const char *sl_last_error_message(void);

/**
 * Releases a string returned through a `char **` output.
 *
 * # Safety
 * `s` must be null or a pointer previously returned by this library and
 * not yet freed.
 */
void sl_string_free(char *s);

/**
 * Builds a graph on vertices `0..n` from `edge_count` pairs laid out flat
 * as `u0, v0, u1, v1, ...`. Loops, duplicates, and out-of-range endpoints
 * are rejected.
 *
 * # Safety
 * `edges` must point to `2 * edge_count` readable `uint32_t`s (it may be
 * null when `edge_count` is zero), and `out` must be a valid destination.
 */
enum sl_status sl_graph_from_edges(uint32_t n,
                                   const uint32_t *edges,
                                   size_t edge_count,
                                   struct sl_graph **out);

/**
 * Parses the text edge-list format: a `n m` header line followed by one
 * `u v` line per edge.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid destination.
 */
enum sl_status sl_graph_from_edge_list(const char *text, struct sl_graph **out);

/**
 * Generates a graph from a JSON spec such as
 * `{"class":"gnp","p":0.02,"n":200,"seed":7}`. `seed` defaults to zero;
 * only the sampled families consume it.
 *
 * # Safety
 * `spec_json` must be a NUL-terminated string and `out` a valid
 * destination.
 */
enum sl_status sl_graph_generate(const char *spec_json, struct sl_graph **out);

/**
 * Releases a graph handle.
 *
 * # Safety
 * `graph` must be null or a live handle from a constructor; it is dead
 * afterwards.
 */
void sl_graph_free(struct sl_graph *graph);

/**
 * Number of vertices, or zero for a null handle.
 *
 * # Safety
 * `graph` must be null or a live handle.
 */
uint32_t sl_graph_vertex_count(const struct sl_graph *graph);

/**
 * Number of edges, or zero for a null handle.
 *
 * # Safety
 * `graph` must be null or a live handle.
 */
uint32_t sl_graph_edge_count(const struct sl_graph *graph);

/**
 * Copies the edges flat as `u0, v0, u1, v1, ...` in canonical order.
 * `capacity` counts `uint32_t` slots, so a full copy needs
 * `2 * sl_graph_edge_count()` of them; `written` receives the required
 * slot count. Pass a null `buf` to query the size.
 *
 * # Safety
 * `graph` must be a live handle, `buf` null or `capacity` writable slots,
 * and `written` a valid destination.
 */
enum sl_status sl_graph_edges(const struct sl_graph *graph,
                              uint32_t *buf,
                              size_t capacity,
                              size_t *written);

/**
 * Draws the orientation that any engine running on `seed` would use in
 * `round` (rounds are 1-based; round 0 is the plain one-shot draw).
 *
 * # Safety
 * `graph` must be a live handle and `out` a valid destination.
 */
enum sl_status sl_orientation_sample(const struct sl_graph *graph,
                                     uint64_t seed,
                                     uint64_t round,
                                     struct sl_orientation **out);

/**
 * Releases an orientation handle.
 *
 * # Safety
 * `orientation` must be null or a live handle; it is dead afterwards.
 */
void sl_orientation_free(struct sl_orientation *orientation);

/**
 * The arc of edge `edge_index` as a `(from, to)` pair.
 *
 * # Safety
 * `orientation` must be a live handle; `from` and `to` must be valid
 * destinations.
 */
enum sl_status sl_orientation_arc(const struct sl_orientation *orientation,
                                  size_t edge_index,
                                  uint32_t *from,
                                  uint32_t *to);

/**
 * Copies the sinks (vertices with no outgoing arc) in ascending order,
 * using the same two-call pattern as `sl_graph_edges`; `capacity` and
 * `written` count vertices.
 *
 * # Safety
 * `orientation` must be a live handle, `buf` null or `capacity` writable
 * slots, and `written` a valid destination.
 */
enum sl_status sl_orientation_sinks(const struct sl_orientation *orientation,
                                    uint32_t *buf,
                                    size_t capacity,
                                    size_t *written);

/**
 * One if the orientation has no directed cycle, zero if it has one,
 * minus one for a null handle.
 *
 * # Safety
 * `orientation` must be null or a live handle.
 */
int32_t sl_orientation_is_acyclic(const struct sl_orientation *orientation);

/**
 * Exact E[X] and Pr[X > 0] by enumerating all `2^m` orientations, as
 * doubles. Fails with `SL_ERR_CAP_EXCEEDED` above
 * `SL_ENUMERATION_EDGE_CAP` edges; `sl_exact_stats_json` keeps full
 * precision.
 *
 * # Safety
 * `graph` must be a live handle; `expected_sinks` and `prob_positive`
 * must be valid destinations.
 */
enum sl_status sl_exact_stats(const struct sl_graph *graph,
                              double *expected_sinks,
                              double *prob_positive);

/**
 * Exact enumeration results as JSON with full-precision rationals:
 * `{"expected_sinks":"7/4","prob_positive":"1/1","orientations":"32",
 * "expected_sinks_f64":1.75,"prob_positive_f64":1.0}`.
 *
 * # Safety
 * `graph` must be a live handle and `out_json` a valid destination; free
 * the result with `sl_string_free`.
 */
enum sl_status sl_exact_stats_json(const struct sl_graph *graph, char **out_json);

/**
 * E[X] through the per-vertex degree identity, exact for every graph and
 * cheap even when enumeration is unaffordable.
 *
 * # Safety
 * `graph` must be a live handle and `out` a valid destination.
 */
enum sl_status sl_degree_sum_expected(const struct sl_graph *graph, double *out);

/**
 * Closed-form value of `statistic` for the family named in `spec_json`
 * (same shape as `sl_graph_generate`; the seed is ignored). `relation`
 * reports whether the value is exact, a lower bound, or an approximation.
 * Families without a form fail with `SL_ERR_NO_CLOSED_FORM`.
 *
 * # Safety
 * `spec_json` must be a NUL-terminated string; `value` and `relation`
 * must be valid destinations.
 */
enum sl_status sl_closed_form(const char *spec_json,
                              enum sl_statistic statistic,
                              double *value,
                              enum sl_relation *relation);

/**
 * Projected number of rounds to drain an instance of the family named in
 * `spec_json`, from the per-round survivor recurrence.
 *
 * # Safety
 * `spec_json` must be a NUL-terminated string and `out` a valid
 * destination.
 */
enum sl_status sl_expected_rounds(const char *spec_json, double *out);

/**
 * Monte Carlo estimate of `statistic` over fresh one-round orientations.
 * `point` receives the sample mean and `std_error` its standard error.
 *
 * # Safety
 * `graph` must be a live handle; `point` and `std_error` must be valid
 * destinations.
 */
enum sl_status sl_monte_carlo(const struct sl_graph *graph,
                              enum sl_statistic statistic,
                              uint64_t trials,
                              uint64_t seed,
                              double *point,
                              double *std_error);

/**
 * Runs the centralized engine and returns the full run as JSONL (header
 * line, then one event per line). `max_rounds` of zero means the default
 * budget of ten rounds per vertex.
 *
 * # Safety
 * `graph` must be a live handle and `out_trace` a valid destination; free
 * the result with `sl_string_free`.
 */
enum sl_status sl_simulate_central(const struct sl_graph *graph,
                                   uint64_t seed,
                                   uint64_t max_rounds,
                                   char **out_trace);

/**
 * Runs the message-passing engine under the delay law in `delay_json`
 * (for example `{"dist":"uniform","min":1,"max":9,"seed":3}`; null means
 * instant delivery) and returns the run as JSONL, message events
 * included. `max_rounds` of zero means the default budget.
 *
 * # Safety
 * `graph` must be a live handle, `delay_json` null or a NUL-terminated
 * string, and `out_trace` a valid destination; free the result with
 * `sl_string_free`.
 */
enum sl_status sl_simulate_dist(const struct sl_graph *graph,
                                uint64_t seed,
                                uint64_t max_rounds,
                                const char *delay_json,
                                char **out_trace);

/**
 * Verifies a JSONL trace from any engine. `clean` receives one when every
 * check passes and zero otherwise; `report_json` (optional, may be null)
 * receives the engine-specific report. Only traces too malformed to check
 * at all fail with a non-`SL_OK` status.
 *
 * # Safety
 * `trace_jsonl` must be a NUL-terminated string; `clean` must be a valid
 * destination; `report_json` must be null or a valid destination, and any
 * string written through it must be freed with `sl_string_free`.
 */
enum sl_status sl_verify_trace(const char *trace_jsonl, int32_t *clean, char **report_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SINKLOCK_H */
