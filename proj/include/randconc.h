/*
 * Copyright (c) 2026, The randconc authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the randconc library.
 *
 * Handles are opaque; every call that can fail returns an rc_status and
 * leaves a message for rc_last_error() (per thread). Strings returned
 * through char** are heap-allocated and released with rc_string_free.
 */

#ifndef RANDCONC_H
#define RANDCONC_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(__GNUC__)
#define RC_API __attribute__((visibility("default")))
#else
#define RC_API
#endif

typedef enum rc_status {
  RC_OK = 0,
  RC_CHECK_FAILED = 1,  /* a report was produced and some check failed */
  RC_INVALID_CONFIG = 2,
  RC_PARSE_ERROR = 3,
  RC_INVALID_ARGUMENT = 4,
  RC_INTERNAL = 5
} rc_status;

typedef struct rc_program rc_program;
typedef struct rc_report rc_report;

RC_API const char* rc_version(void);

/* Message for the last failing call on this thread, or "". */
RC_API const char* rc_last_error(void);

RC_API void rc_string_free(char* s);

/* Programs in the s-expression syntax. */
RC_API rc_status rc_program_parse(const char* text, rc_program** out);
RC_API void rc_program_free(rc_program* p);
/* Single-line canonical text. */
RC_API rc_status rc_program_unparse(const rc_program* p, char** out);
/* Multi-line text breaking at `width` columns. */
RC_API rc_status rc_program_pretty(const rc_program* p, size_t width, char** out);

/* Runs the experiment described by a JSON config (see docs/report-schema.md).
 * Returns RC_INVALID_CONFIG without a report when the config is rejected;
 * otherwise a report is stored in *out and the status is RC_OK or
 * RC_CHECK_FAILED. */
RC_API rc_status rc_run(const char* config_json, rc_report** out);
RC_API void rc_report_free(rc_report* r);
RC_API int rc_report_passed(const rc_report* r);
/* Report as JSON; indent < 0 gives one line. */
RC_API rc_status rc_report_json(const rc_report* r, int indent, char** out);
RC_API rc_status rc_report_csv(const rc_report* r, char** out);

/* Space-separated command names. */
RC_API const char* rc_commands(void);

#ifdef __cplusplus
}
#endif

#endif /* RANDCONC_H */
