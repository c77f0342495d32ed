/* Copyright (c) 2026 ltn-lab developers
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the LtN coupling laboratory. The library is driven by JSON
 * run configurations; results come back as rendered report text plus an
 * optional nodal solution. All functions return a status code:
 *   0 success, 2 configuration/validation error, 3 solver failure,
 *   4 I/O failure, 1 internal error.
 * On failure a one-line diagnostic is available via ltn_run_message().
 */

#ifndef LTN_LTN_H
#define LTN_LTN_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define LTN_API __declspec(dllexport)
#else
#define LTN_API __attribute__((visibility("default")))
#endif

enum {
  LTN_OK = 0,
  LTN_ERR_INTERNAL = 1,
  LTN_ERR_CONFIG = 2,
  LTN_ERR_SOLVER = 3,
  LTN_ERR_IO = 4
};

typedef struct ltn_run ltn_run; /* opaque run handle */

LTN_API const char* ltn_version(void);

/* Parses and validates a JSON configuration. On success *out owns the handle
 * (release with ltn_run_destroy). On failure *out is still created when
 * possible so the message can be read, or NULL on allocation failure. */
LTN_API int ltn_run_create(const char* config_json, ltn_run** out);

/* Executes a subcommand: "run", "patch-test", "ghost-force", "converge",
 * "sweep-robin" or "compare". out_dir may be NULL (no files written); format
 * is "json" (default when NULL) or "csv". */
LTN_API int ltn_run_execute(ltn_run* run, const char* command, const char* out_dir,
                            const char* format);

/* Rendered report text from the last successful execute (UTF-8, owned by the
 * handle; valid until the next execute or destroy). */
LTN_API const char* ltn_run_report(const ltn_run* run);

/* Solution values from the last execute when the task produced a field;
 * returns the number of nodes and exposes borrowed pointers. Returns 0 when
 * no solution is available. */
LTN_API int ltn_run_solution(const ltn_run* run, const double** xs, const double** us,
                             int* n_nodes);

/* Last diagnostic message (empty string when none). */
LTN_API const char* ltn_run_message(const ltn_run* run);

LTN_API void ltn_run_destroy(ltn_run* run);

#ifdef __cplusplus
}
#endif

#endif /* LTN_LTN_H */
