#ifndef WITTKIT_H
#define WITTKIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum WkStatus {
  WkStatus_Ok = 0,
  WkStatus_ParseError = 1,
  WkStatus_HypothesisFailed = 2,
  WkStatus_NotTabulated = 3,
  WkStatus_BadInput = 4,
  WkStatus_InternalError = 5,
} WkStatus;

/**
 * Opaque evaluation result. On failure it still carries the error message.
 */
typedef struct WkResult WkResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Evaluates a group query such as `W^0(node(F5) x Gm)`.
 *
 * Writes a fresh handle to `out` (never NULL on return code != InternalError)
 * and returns its status. The caller owns the handle and must release it
 * with `wk_result_free`.
 *
 * # Safety
 * `query` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum WkStatus wk_eval(const char *query, struct WkResult **out);

/**
 * The result value on success, or the error message on failure.
 *
 * # Safety
 * `r` must be a live handle from `wk_eval`.
 */
const char *wk_result_value(const struct WkResult *r);

/**
 * Status stored in the handle.
 *
 * # Safety
 * `r` must be a live handle from `wk_eval`.
 */
enum WkStatus wk_result_status(const struct WkResult *r);

/**
 * Number of audit-trail entries.
 *
 * # Safety
 * `r` must be a live handle from `wk_eval`.
 */
int wk_result_rule_count(const struct WkResult *r);

/**
 * The i-th audit-trail entry, or NULL when out of range.
 *
 * # Safety
 * `r` must be a live handle from `wk_eval`.
 */
const char *wk_result_rule(const struct WkResult *r, int i);

/**
 * Number of warnings attached to the evaluation.
 *
 * # Safety
 * `r` must be a live handle from `wk_eval`.
 */
int wk_result_warning_count(const struct WkResult *r);

/**
 * The i-th warning, or NULL when out of range.
 *
 * # Safety
 * `r` must be a live handle from `wk_eval`.
 */
const char *wk_result_warning(const struct WkResult *r, int i);

/**
 * Releases a handle. NULL is a no-op.
 *
 * # Safety
 * `r` must be NULL or a handle from `wk_eval` not yet freed.
 */
void wk_result_free(struct WkResult *r);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* WITTKIT_H */
