/* Copyright 2026 The evinlier authors
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

/* C interface to the evinlier library: a zero-inflated extreme value
 * mixture (point mass at zero + truncated gamma bulk + generalized Pareto
 * tail with an explicit tail fraction), with exact sampling, maximum
 * likelihood fitting, asymptotic and bootstrap inference, goodness-of-fit
 * testing, threshold diagnostics, risk measures, and a Monte Carlo study
 * runner.
 *
 * Conventions:
 *  - every fallible call returns an evi_status; EVI_OK is 0;
 *  - evi_last_error() returns a thread-local message for the last failure;
 *  - structured reports cross the boundary as JSON strings owned by the
 *    library (release with evi_string_free);
 *  - vector outputs are written into caller-provided buffers.
 */

#ifndef EVINLIER_H
#define EVINLIER_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum evi_status {
  EVI_OK = 0,
  EVI_ERR_INVALID_ARGUMENT = 1,
  EVI_ERR_DOMAIN = 2,
  EVI_ERR_IO = 3,
  EVI_ERR_NONCONVERGENCE = 4,
  EVI_ERR_NUMERIC = 5
} evi_status;

typedef enum evi_model {
  EVI_MODEL_FEVIMM = 0, /* atom + truncated gamma bulk + GPD tail */
  EVI_MODEL_FEVMM = 1,  /* no atom, parameterized tail fraction */
  EVI_MODEL_EVMM = 2    /* no atom, tail fraction implied by the bulk */
} evi_model;

typedef enum evi_fit_method {
  EVI_FIT_FULL = 0,
  EVI_FIT_PROFILE = 1
} evi_fit_method;

/* Mixture parameters: P(X = 0) = phi1, gamma(eta, beta) bulk truncated to
 * (0, u), GPD(u, sigma, xi) tail with tail fraction phi2. */
typedef struct evi_params {
  double phi1;
  double eta;
  double beta;
  double u;
  double xi;
  double sigma;
  double phi2;
} evi_params;

const char* evi_version(void);
const char* evi_status_name(evi_status status);
/* Thread-local description of the most recent failure in this thread. */
const char* evi_last_error(void);
void evi_string_free(char* s);
void evi_buffer_free(double* p);

/* ---- distribution ------------------------------------------------------ */

evi_status evi_pdf(const evi_params* params, double x, double* out);
evi_status evi_cdf(const evi_params* params, double x, double* out);
evi_status evi_quantile(const evi_params* params, double p, double* out);
evi_status evi_tail_value_at_risk(const evi_params* params, double p,
                                  double* out);

/* ---- sampling ---------------------------------------------------------- */

/* Writes n draws into out (caller allocated). Deterministic under seed. */
evi_status evi_sample(const evi_params* params, size_t n, uint64_t seed,
                      double* out);

/* ---- fitting ----------------------------------------------------------- */

typedef struct evi_fit evi_fit; /* opaque fit handle */

typedef struct evi_fit_options {
  evi_fit_method method;
  const double* threshold_grid; /* profile method only */
  size_t threshold_grid_len;
  int max_iterations; /* <= 0 selects the default (20000) */
  int restarts;       /* < 0 selects the default (3) */
  double tolerance;   /* <= 0 selects the default (1e-8) */
  uint64_t seed;
  int threads;     /* <= 0 selects the hardware concurrency */
  double ci_alpha; /* <= 0 selects 0.05 */
} evi_fit_options;

void evi_fit_options_init(evi_fit_options* options);

evi_status evi_fit_data(const double* data, size_t n, evi_model model,
                        const evi_fit_options* options, evi_fit** out);
void evi_fit_free(evi_fit* fit);

evi_status evi_fit_get_params(const evi_fit* fit, evi_params* out);
evi_status evi_fit_get_loglik(const evi_fit* fit, double* out);
int evi_fit_converged(const evi_fit* fit);
/* Full report (estimates, SEs/CIs when available, nAIC, convergence
 * metadata) as canonical JSON: sorted keys, shortest round-trip floats. */
evi_status evi_fit_report_json(const evi_fit* fit, char** out_json);

/* ---- goodness of fit ---------------------------------------------------- */

/* Fits the model, computes AD/CvM/KS against the fitted CDF, and calibrates
 * p-values by a parametric bootstrap with B refits. */
evi_status evi_gof_json(const double* data, size_t n, evi_model model, int B,
                        uint64_t seed, int threads, char** out_json);

/* ---- threshold diagnostics ---------------------------------------------- */

/* Mean excess over x > t. For each threshold, ok[i] is 1 when the point is
 * valid; invalid points (fewer than min_exceedances) leave NaN outputs. */
evi_status evi_mean_excess(const double* data, size_t n,
                           const double* thresholds, size_t m,
                           size_t min_exceedances, double* excess_mean,
                           double* ci_lower, double* ci_upper, int* ok);

/* GPD stability: xi(t) and modified scale sigma*(t) = sigma(t) - xi(t) t. */
evi_status evi_stability(const double* data, size_t n,
                         const double* thresholds, size_t m,
                         size_t min_exceedances, double* sigma_star,
                         double* sigma_lo, double* sigma_hi, double* xi,
                         double* xi_lo, double* xi_hi, int* ok);

/* Pickands estimates at the given k values (requires 4k <= n per point). */
evi_status evi_pickands(const double* data, size_t n, const size_t* k_values,
                        size_t m, double* xi, int* ok);

/* level(T) = quantile(1 - 1/T); inside_atom[i] = 1 marks periods resolved
 * by the zero atom (level 0). */
evi_status evi_return_levels(const evi_params* params, const double* periods,
                             size_t m, double* levels, int* inside_atom);

/* Percentile bootstrap bands for the fitted model's return levels. */
evi_status evi_return_level_bands(const evi_fit* fit, size_t n,
                                  const double* periods, size_t m, int B,
                                  uint64_t seed, int threads, double* lower,
                                  double* upper);

/* ---- simulation studies -------------------------------------------------- */

/* Runs the scenario file (key = value format) and returns the full report
 * as JSON: per (model, n, phi1) cell metrics plus the estimates matrices. */
evi_status evi_bench_run_file(const char* scenario_path, int threads,
                              char** out_json);

/* ---- CSV input ----------------------------------------------------------- */

/* Single-column CSV with optional "x" header. The buffer is library-owned;
 * release with evi_buffer_free. Parse errors carry the line number in
 * evi_last_error(). */
evi_status evi_read_csv(const char* path, double** out_values, size_t* out_n);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* EVINLIER_H */
