// Copyright 2026 The csms Authors
// SPDX-License-Identifier: Apache-2.0

/* C interface to the csms library: certified computations on coded
 * complete separable metric spaces.  All strings are UTF-8 JSON unless
 * stated otherwise.  Handles are opaque and must be freed by the caller. */

#ifndef CSMS_CSMS_H_
#define CSMS_CSMS_H_

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define CSMS_API __declspec(dllexport)
#else
#define CSMS_API __attribute__((visibility("default")))
#endif

typedef enum csms_status {
  CSMS_OK = 0,
  CSMS_ERR_SPEC = 1,     /* malformed JSON, rational or spec */
  CSMS_ERR_ARGUMENT = 2, /* null pointer or bad handle */
  CSMS_ERR_INTERNAL = 3
} csms_status;

typedef struct csms_report csms_report;
typedef struct csms_space csms_space;

CSMS_API const char* csms_version(void);

/* Message for the last non-OK status on this thread. */
CSMS_API const char* csms_last_error(void);

/* Runs `command` (lebesgue, verify, subcover, witness, pairs, modulus,
 * embed, treecover, mincompact, distlower, distupper, check) on a payload.
 * flags_json may be NULL.  A run that ends in NotFound or an operation
 * failure still returns CSMS_OK; see csms_report_exit_code. */
CSMS_API csms_status csms_job_run(const char* command, const char* payload_json,
                                  const char* flags_json, csms_report** out);

/* Deterministic JSON text of the report; owned by the report. "" for NULL. */
CSMS_API const char* csms_report_json(const csms_report* report);
/* 0 certified, 2 NotFound or failure. */
CSMS_API int csms_report_exit_code(const csms_report* report);
CSMS_API const char* csms_report_summary(const csms_report* report);
CSMS_API void csms_report_free(csms_report* report);

/* Catalog space from {"space": name, ...}. */
CSMS_API csms_status csms_space_open(const char* spec_json, csms_space** out);
/* Bracket [lower, upper] of d(a, b) for code-point literals, as "p/q"
 * strings released with csms_string_free. */
CSMS_API csms_status csms_space_distance(const csms_space* space, const char* a_json,
                                         const char* b_json, unsigned precision, char** lower,
                                         char** upper);
CSMS_API void csms_space_free(csms_space* space);

CSMS_API void csms_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* CSMS_CSMS_H_ */
