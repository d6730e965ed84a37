// Copyright 2026 The Coalesce Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the coalesce library. Every handle is opaque and owned by
 * the caller; strings returned through char** are freed with
 * coal_string_free. Functions return COAL_OK or an error code, and the
 * message for the last failure on the calling thread is available from
 * coal_last_error. */

#ifndef COALESCE_COALESCE_H_
#define COALESCE_COALESCE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(COALESCE_BUILDING_LIBRARY)
#define COAL_API __attribute__((visibility("default")))
#else
#define COAL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum coal_status {
  COAL_OK = 0,
  COAL_E_INVALID_ARGUMENT = 1,
  COAL_E_PARSE = 2,
  COAL_E_DEGENERATE_TIE = 3,
  COAL_E_NOT_RED_ENDED = 4,
  COAL_E_UNSUPPORTED = 5,
  COAL_E_INFINITE_MOMENT = 6,
  COAL_E_DOMAIN = 7,
  COAL_E_MALFORMED_ALTERNATION = 8,
  COAL_E_UNKNOWN_PRESET = 9,
  COAL_E_MISSING_PARAM = 10,
  COAL_E_PRECONDITION_FAILED = 11,
  COAL_E_IO = 12,
  COAL_E_INTERNAL = 100
} coal_status;

typedef enum coal_colour { COAL_RED = 0, COAL_BLUE = 1 } coal_colour;

/* Outcome of a verification, mirrored in the "status" field of its JSON. */
typedef enum coal_verdict {
  COAL_VERIFIED = 0,
  COAL_FALSIFIED = 1,
  COAL_INCONCLUSIVE = 2
} coal_verdict;

typedef struct coal_interval coal_interval;
typedef struct coal_dist coal_dist;

COAL_API const char* coal_version(void);
COAL_API const char* coal_status_name(coal_status s);
COAL_API const char* coal_last_error(void);
/* Byte offset of the last parse error on this thread, or -1. */
COAL_API long coal_last_parse_offset(void);
COAL_API void coal_string_free(char* s);

/* ---- coloured intervals ---- */

COAL_API coal_status coal_interval_create(coal_colour first, const double* lengths,
                                          size_t n, coal_interval** out);
/* Text form "R:2 B:1.5 R:3" (separators: spaces or commas). */
COAL_API coal_status coal_interval_parse(const char* text, coal_interval** out);
COAL_API void coal_interval_free(coal_interval* c);
COAL_API size_t coal_interval_size(const coal_interval* c);
COAL_API coal_status coal_interval_segment(const coal_interval* c, size_t i,
                                           coal_colour* colour, double* length);
/* recolour_counts, when non-null, receives coal_interval_size(c) entries. */
COAL_API coal_status coal_interval_closure(const coal_interval* c, coal_interval** out,
                                           uint32_t* recolour_counts);
COAL_API coal_status coal_interval_goodness_json(const coal_interval* c, double alpha,
                                                 coal_colour target, char** json);
COAL_API coal_status coal_interval_json(const coal_interval* c, char** json);
COAL_API coal_status coal_render_snapshots(const coal_interval* c,
                                           const double* thresholds, size_t n,
                                           const char* path);

/* ---- distributions ---- */

COAL_API coal_status coal_dist_parse(const char* text, coal_dist** out);
COAL_API void coal_dist_free(coal_dist* d);
COAL_API coal_status coal_dist_string(const coal_dist* d, char** out);
/* Enclosure [lower, upper] of P(X >= x). ih_max_k <= 0 keeps the default. */
COAL_API coal_status coal_dist_tail(const coal_dist* d, double x, int ih_max_k,
                                    double* lower, double* upper);
COAL_API coal_status coal_dist_sample(const coal_dist* d, uint64_t seed, uint64_t trial,
                                      uint32_t slot, double* out);

/* ---- presets ---- */

COAL_API coal_status coal_preset_list_json(char** json);
/* params_json is an object of numbers, e.g. {"gamma": 0.1216}; may be null.
 * info_json (nullable) receives name, parameters, target and threshold. */
COAL_API coal_status coal_preset_get(const char* name, const char* params_json,
                                     coal_dist** red, coal_dist** blue,
                                     char** info_json);

/* ---- Monte Carlo ---- */

COAL_API coal_status coal_sample_window(const coal_dist* red, const coal_dist* blue,
                                        size_t n, uint64_t seed, uint64_t trial,
                                        coal_interval** out);

typedef struct coal_estimate_config {
  size_t n;
  double alpha;
  uint64_t trials;
  uint64_t seed;
  coal_colour target;
  int threads;
  int has_q_star;
  double q_star;
} coal_estimate_config;

/* trials_csv, when non-null, receives the per-trial CSV. */
COAL_API coal_status coal_estimate_q(const coal_dist* red, const coal_dist* blue,
                                     const coal_estimate_config* cfg, char** json,
                                     char** trials_csv);

/* ---- renormalisation ---- */

typedef struct coal_renorm_config {
  double alpha;
  double beta;
  int64_t k;
  int64_t n;
  double q_input;
  int has_confidence;
  double confidence_log10;
  int max_steps;
} coal_renorm_config;

COAL_API coal_status coal_is_renormalisable(double alpha, double beta, int64_t k,
                                            int* out);
COAL_API coal_status coal_certify_renorm(const coal_dist* red, const coal_dist* blue,
                                         const coal_renorm_config* cfg, char** json,
                                         int* certified);

/* ---- l-bounding ---- */

typedef struct coal_lbound_config {
  double a;
  double lambda;
  double eps;
  double Lambda;
  double delta;
  double eps0;
  int64_t max_steps;
  int64_t record_every;
} coal_lbound_config;

COAL_API coal_status coal_evolve_lbound(const coal_lbound_config* cfg, char** json,
                                        char** csv, coal_verdict* verdict);
COAL_API coal_status coal_reddom_empirical(double a, double eps, double Lambda,
                                           int64_t samples, const double* grid,
                                           size_t grid_n, uint64_t seed, int threads,
                                           char** json);

/* ---- verification ---- */

typedef struct coal_e1_config {
  double Lambda;
  double delta;
  double a_lo, a_hi;
  double x_lo, x_hi;
  int max_depth;
  double min_width;
  int threads;
  int keep_leaves;
} coal_e1_config;

COAL_API void coal_e1_defaults(coal_e1_config* cfg);
COAL_API coal_status coal_verify_e1(const coal_e1_config* cfg, char** json,
                                    coal_verdict* verdict);
COAL_API coal_status coal_verify_e1_largex(double Lambda, double x0, char** json,
                                           coal_verdict* verdict);

typedef struct coal_toy_config {
  double gamma;
  coal_colour side;
  double c;
  double a;
  double Lambda;
  double x0; /* 0 picks the side's default */
  int irwin_hall_max_k;
  int keep_chain;
} coal_toy_config;

COAL_API void coal_toy_defaults(coal_toy_config* cfg);
COAL_API coal_status coal_verify_toy(const coal_toy_config* cfg, char** json,
                                     coal_verdict* verdict);

COAL_API coal_status coal_verify_dominance(const coal_dist* x, const coal_dist* y,
                                           int64_t samples, uint64_t seed, double alpha,
                                           int threads, char** json,
                                           coal_verdict* verdict);

#ifdef __cplusplus
}
#endif

#endif /* COALESCE_COALESCE_H_ */
