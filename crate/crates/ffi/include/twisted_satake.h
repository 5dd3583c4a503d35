/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef TWISTED_SATAKE_H
#define TWISTED_SATAKE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TsStatus {
  TS_STATUS_OK = 0,
  TS_STATUS_NULL_POINTER = 1,
  TS_STATUS_INVALID_UTF8 = 2,
  TS_STATUS_UNKNOWN_PRESET = 3,
  TS_STATUS_INVALID_INPUT = 4,
  /**
   * Bad command arguments, as for exit status 1 of the command line.
   */
  TS_STATUS_USAGE = 5,
  /**
   * A property check failed; any report is still written.
   */
  TS_STATUS_CHECK_FAILED = 6,
  TS_STATUS_BUFFER_TOO_SMALL = 7,
  /**
   * A value does not fit the C integer type.
   */
  TS_STATUS_OVERFLOW = 8,
  TS_STATUS_PANIC = 9,
} TsStatus;

/**
 * A validated twisted root datum, opaque to C.
 */
typedef struct TsDatum TsDatum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Loads a built-in preset such as `"SU3"`.
 *
 * # Safety
 * `key` must be a nul-terminated string and `out` a valid pointer.
 */
enum TsStatus ts_datum_from_preset(const char *key, struct TsDatum **out);

/**
 * Parses and validates a datum in the JSON input format. `name` labels it
 * in reports and may be null.
 *
 * # Safety
 * `json` and a non-null `name` must be nul-terminated strings; `out` must be
 * a valid pointer.
 */
enum TsStatus ts_datum_from_json(const char *json, const char *name, struct TsDatum **out);

/**
 * # Safety
 * `d` must come from this library and not have been freed; null is ignored.
 */
void ts_datum_free(struct TsDatum *d);

/**
 * Rank of `X_*(T)`.
 *
 * # Safety
 * `d` must be a live datum and `out` a valid pointer.
 */
enum TsStatus ts_datum_rank(const struct TsDatum *d, size_t *out);

/**
 * `pi_1(G)_I` as its free rank and torsion invariant factors. `len`
 * receives the number of factors; if it exceeds `capacity` nothing is
 * written to `factors` and `TS_STATUS_BUFFER_TOO_SMALL` is returned.
 * `factors` may be null when `capacity` is 0.
 *
 * # Safety
 * `factors` must point to `capacity` writable values; the other pointers
 * must be valid.
 */
enum TsStatus ts_kottwitz_components(const struct TsDatum *d,
                                     size_t *free_rank,
                                     uint64_t *factors,
                                     size_t capacity,
                                     size_t *len);

/**
 * Order of the relative Weyl group `W_0`.
 *
 * # Safety
 * `d` must be a live datum and `out` a valid pointer.
 */
enum TsStatus ts_relative_weyl_order(const struct TsDatum *d, size_t *out);

/**
 * Runs a command-line subcommand on the datum and writes its JSON report to
 * `out`. `argv` holds `argc` arguments starting with the subcommand and
 * omitting the datum, e.g. `{"mv", "-1", "1"}`. A report is also written
 * when a check fails (`TS_STATUS_CHECK_FAILED`) or when `branch` cannot decompose
 * (`TS_STATUS_INVALID_INPUT`); otherwise `*out` is null on failure.
 *
 * # Safety
 * `argv` must point to `argc` nul-terminated strings and `out` must be a
 * valid pointer.
 */
enum TsStatus ts_run_json(const struct TsDatum *d,
                          const char *const *argv,
                          size_t argc,
                          char **out);

/**
 * Number of built-in presets.
 */
size_t ts_preset_count(void);

/**
 * Key of the `i`-th built-in preset as a static string, or null.
 */
const char *ts_preset_key(size_t i);

/**
 * Message for the last failure on this thread, or null. Valid until the
 * next call into the library on the same thread.
 */
const char *ts_last_error(void);

/**
 * # Safety
 * `s` must come from this library and not have been freed; null is ignored.
 */
void ts_string_free(char *s);

/**
 * Schema version of the JSON reports.
 */
uint64_t ts_schema_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TWISTED_SATAKE_H */
