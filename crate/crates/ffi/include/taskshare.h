#ifndef TASKSHARE_H
#define TASKSHARE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TsStatus {
  TS_STATUS_OK = 0,
  /**
   * Null pointer or non-UTF-8 text.
   */
  TS_STATUS_INVALID_ARGUMENT = 1,
  /**
   * Parse or validation failure.
   */
  TS_STATUS_INVALID = 2,
  /**
   * Too many players for exact Shapley computation.
   */
  TS_STATUS_CAP_EXCEEDED = 3,
  /**
   * Internal panic; the handle should not be used again.
   */
  TS_STATUS_INTERNAL = 4,
} TsStatus;

/**
 * Parsed instance plus the reports used for evaluation.
 */
typedef struct TsInstance TsInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses an instance from JSON. On success `*out` owns a new handle that
 * must be released with `ts_instance_free`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum TsStatus ts_instance_from_json(const char *json, struct TsInstance **out);

/**
 * # Safety
 * `instance` must come from `ts_instance_from_json` and not be used after.
 */
void ts_instance_free(struct TsInstance *instance);

/**
 * Number of players, or 0 for a null handle.
 *
 * # Safety
 * `instance` must be null or a live handle.
 */
size_t ts_instance_player_count(const struct TsInstance *instance);

/**
 * Replaces the reports used for evaluation. `json` maps player ids to
 * distributions; players left out report truthfully. A null `json`
 * restores truthful reports.
 *
 * # Safety
 * `instance` must be a live handle; `json` null or NUL-terminated.
 */
enum TsStatus ts_instance_set_reports(struct TsInstance *instance, const char *json);

/**
 * Sets the player limit for Shapley-based calls (clamped to the hard
 * maximum by the solver).
 *
 * # Safety
 * `instance` must be a live handle.
 */
enum TsStatus ts_instance_set_player_cap(struct TsInstance *instance, size_t cap);

/**
 * Value of the coalition whose members are the set bits of `mask` (bit k
 * is the k-th smallest player id), as an exact `n/d` string.
 *
 * # Safety
 * `instance` must be a live handle and `out` a valid pointer.
 */
enum TsStatus ts_coalition_value(const struct TsInstance *instance, uint64_t mask, char **out);

/**
 * Grand-coalition value and assignment as JSON
 * (`{"value": "n/d", "assignment": [ids or null]}`).
 *
 * # Safety
 * `instance` must be a live handle and `out` a valid pointer.
 */
enum TsStatus ts_solve_json(const struct TsInstance *instance, char **out);

/**
 * Shapley values as a JSON object from player id to `n/d` string.
 *
 * # Safety
 * `instance` must be a live handle and `out` a valid pointer.
 */
enum TsStatus ts_shapley_json(const struct TsInstance *instance, char **out);

/**
 * Expected rewards against the true distributions. `mechanism` is one of
 * `shapley`, `sev`, `sevb`, `vcgev`, `equal`.
 *
 * # Safety
 * `instance` must be a live handle, `mechanism` NUL-terminated and `out`
 * a valid pointer.
 */
enum TsStatus ts_expected_rewards_json(const struct TsInstance *instance,
                                       const char *mechanism,
                                       char **out);

/**
 * Rewards for one realization of the assigned players, written as
 * `"1=1,3=2"`.
 *
 * # Safety
 * `instance` must be a live handle, the strings NUL-terminated and `out`
 * a valid pointer.
 */
enum TsStatus ts_realized_rewards_json(const struct TsInstance *instance,
                                       const char *mechanism,
                                       const char *realization,
                                       char **out);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void ts_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next call on the same thread.
 */
const char *ts_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TASKSHARE_H */
