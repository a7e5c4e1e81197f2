#ifndef NBA_H
#define NBA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. The first five match the exit codes of the `nba` binary.
 */
typedef enum NbaStatus {
  NBA_STATUS_OK = 0,
  /**
   * The call succeeded but reported findings (failed verdicts, blocking
   * check issues, an inconsistent fixpoint).
   */
  NBA_STATUS_FINDINGS = 1,
  /**
   * A project file could not be read or parsed.
   */
  NBA_STATUS_INPUT_ERROR = 2,
  NBA_STATUS_UNKNOWN_SCENARIO = 3,
  /**
   * The requested fact does not hold in the scenario.
   */
  NBA_STATUS_NOT_DERIVABLE = 4,
  NBA_STATUS_NULL_ARGUMENT = 5,
  NBA_STATUS_INVALID_UTF8 = 6,
  NBA_STATUS_INDEX_OUT_OF_RANGE = 7,
  /**
   * A bug: the library panicked. The handle should not be used again.
   */
  NBA_STATUS_PANIC = 8,
} NbaStatus;

/**
 * A loaded project: ontology, rules, sources, scenes and expectations.
 */
typedef struct NbaProject NbaProject;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static NUL-terminated string.
 */
const char *nba_version(void);

/**
 * The message of the last failed call on this thread, or null. Valid until
 * the next call into the library on this thread.
 */
const char *nba_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void nba_string_free(char *s);

/**
 * Loads the project file at `path`. On success `*out` owns a handle that
 * must be released with [`nba_project_free`].
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum NbaStatus nba_project_open(const char *path, struct NbaProject **out);

/**
 * Releases a project handle. Null is ignored.
 *
 * # Safety
 * `project` must come from [`nba_project_open`] and not be used afterwards.
 */
void nba_project_free(struct NbaProject *project);

/**
 * Number of scenes in the project; 0 for a null handle.
 *
 * # Safety
 * `project` must be null or a live handle.
 */
size_t nba_project_scenario_count(const struct NbaProject *project);

/**
 * Copies the id of scene `index` (in project order) into `*out`.
 *
 * # Safety
 * `project` must be a live handle; `out` must be writable.
 */
enum NbaStatus nba_project_scenario_id(const struct NbaProject *project, size_t index, char **out);

/**
 * Runs inference on one scenario and returns the fact dump, one
 * `asserted`/`closure`/`derived` line per fact. An inconsistent fixpoint is
 * still dumped and yields [`NbaStatus::Findings`].
 *
 * # Safety
 * `project` must be a live handle, `scenario` a NUL-terminated string and
 * `out` writable.
 */
enum NbaStatus nba_infer(const struct NbaProject *project, const char *scenario, char **out);

/**
 * Verifies every scenario and returns the JSON report. Returns
 * [`NbaStatus::Findings`] (with the report set) when a scenario fails.
 *
 * # Safety
 * `project` must be a live handle; `out` must be writable.
 */
enum NbaStatus nba_verify(const struct NbaProject *project, char **out);

/**
 * Explains `fact` (e.g. `"anhalten_in(ego, zoneBlau1)"`) in a scenario and
 * returns the derivation tree with its sources as JSON.
 *
 * # Safety
 * `project` must be a live handle, `scenario` and `fact` NUL-terminated
 * strings and `out` writable.
 */
enum NbaStatus nba_trace(const struct NbaProject *project,
                         const char *scenario,
                         const char *fact,
                         char **out);

/**
 * Runs the `check` command on a project file and returns its report text.
 * Blocking issues yield [`NbaStatus::Findings`] with the report set.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum NbaStatus nba_check(const char *path, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NBA_H */
