/*
 * Copyright 2026 The cvntcp Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the cvntcp library.
 *
 * Every fallible call returns a cvntcp_status. On failure the message of the
 * most recent error on the calling thread is available from
 * cvntcp_last_error() until the next failing call on that thread. Handles
 * are opaque; each *_create / *_load has a matching *_destroy, and destroy
 * accepts NULL.
 */
#ifndef CVNTCP_H
#define CVNTCP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CVNTCP_API __declspec(dllexport)
#else
#define CVNTCP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cvntcp_status {
  CVNTCP_OK = 0,
  CVNTCP_ERR_PARAMETER = 1,
  CVNTCP_ERR_DOMAIN = 2,
  CVNTCP_ERR_SHAPE = 3,
  CVNTCP_ERR_DEGENERATE = 4,
  CVNTCP_ERR_UNATTAINABLE = 5,
  CVNTCP_ERR_CAPACITY = 6,
  CVNTCP_ERR_IO = 7,
  CVNTCP_ERR_CONFIG = 8,
  CVNTCP_ERR_NULL_ARGUMENT = 9,
  CVNTCP_ERR_INTERNAL = 10
} cvntcp_status;

/* Message of the most recent failure on the calling thread. Successful calls
 * leave it unchanged. */
CVNTCP_API const char* cvntcp_last_error(void);
CVNTCP_API const char* cvntcp_status_name(cvntcp_status status);
CVNTCP_API const char* cvntcp_version(void);

/* ---- dose response ----------------------------------------------------- */

typedef enum cvntcp_dose_kind {
  CVNTCP_SINGLE_HIT = 0,
  CVNTCP_MULTI_TARGET = 1,
  CVNTCP_HYBRID = 2,
  CVNTCP_LINEAR_QUADRATIC = 3
} cvntcp_dose_kind;

typedef struct cvntcp_dose_model cvntcp_dose_model;

/* beta is read by HYBRID and LINEAR_QUADRATIC, targets by MULTI_TARGET and
 * HYBRID; other variants ignore them. */
CVNTCP_API cvntcp_status cvntcp_dose_model_create(cvntcp_dose_kind kind,
                                                  double alpha, double beta,
                                                  int targets,
                                                  cvntcp_dose_model** out);
CVNTCP_API void cvntcp_dose_model_destroy(cvntcp_dose_model* model);

CVNTCP_API cvntcp_status cvntcp_surviving_fraction(
    const cvntcp_dose_model* model, double dose, double* out);
CVNTCP_API cvntcp_status cvntcp_fsu_kill_probability(
    const cvntcp_dose_model* model, int64_t cells, double dose, double* out);
CVNTCP_API cvntcp_status cvntcp_dose_for_kill_probability(
    const cvntcp_dose_model* model, int64_t cells, double target,
    double tolerance, double* out);
CVNTCP_API cvntcp_status cvntcp_dose_for_fraction(
    const cvntcp_dose_model* model, int64_t cells, double kappa, int64_t n,
    double gamma, double tolerance, double* out);

/* ---- critical-volume NTCP --------------------------------------------- */

typedef enum cvntcp_method {
  CVNTCP_METHOD_EXACT = 0,
  CVNTCP_METHOD_NORMAL = 1,
  CVNTCP_METHOD_NORMAL_INTEGER = 2,
  CVNTCP_METHOD_WEISS = 3
} cvntcp_method;

typedef struct cvntcp_approx {
  double value;
  double error_bound; /* meaningful only when certified != 0 */
  int certified;
  cvntcp_method method;
} cvntcp_approx;

typedef struct cvntcp_fraction_features {
  double p1;
  double p_star;
  double kappa_star;
  double c;
} cvntcp_fraction_features;

CVNTCP_API double cvntcp_normal_cdf(double x);
CVNTCP_API cvntcp_status cvntcp_normal_quantile(double probability,
                                                double* out);

CVNTCP_API cvntcp_status cvntcp_ntcp_exact(int64_t n, double p,
                                           int64_t threshold, double* out);
CVNTCP_API cvntcp_status cvntcp_ntcp_normal(int64_t n, double p, double x,
                                            cvntcp_approx* out);
CVNTCP_API cvntcp_status cvntcp_ntcp_normal_integer_threshold(
    int64_t n, double p, double gamma, int64_t* threshold, cvntcp_approx* out);
CVNTCP_API cvntcp_status cvntcp_ntcp_weiss(int64_t n, double p, int64_t k,
                                           int64_t m, cvntcp_approx* out);
CVNTCP_API cvntcp_status cvntcp_threshold_for_confidence(int64_t n, double p,
                                                         double gamma,
                                                         double* out);
CVNTCP_API cvntcp_status cvntcp_kill_fraction(double p, double c, double* out);
CVNTCP_API cvntcp_status cvntcp_fraction_curve_features(
    double c, cvntcp_fraction_features* out);
CVNTCP_API cvntcp_status cvntcp_invert_fraction(double kappa, double c,
                                                double* out);

/* fsu_volumes may be NULL for n equal volumes of total_volume / n. */
CVNTCP_API cvntcp_status cvntcp_damage_volume(int64_t n, double total_volume,
                                              const double* fsu_volumes,
                                              const uint8_t* states,
                                              size_t state_count, double* out);

/* ---- lattice fields ---------------------------------------------------- */

typedef struct cvntcp_field_model cvntcp_field_model;
typedef struct cvntcp_field_sample cvntcp_field_sample;

typedef enum cvntcp_sample_encoding {
  CVNTCP_ENCODING_BINARY = 0,
  CVNTCP_ENCODING_CSV = 1
} cvntcp_sample_encoding;

CVNTCP_API cvntcp_status cvntcp_field_model_iid(int dimension, double p,
                                                cvntcp_field_model** out);
CVNTCP_API cvntcp_status cvntcp_field_model_threshold(
    int dimension, int radius, double theta, int64_t k_min,
    cvntcp_field_model** out);
CVNTCP_API cvntcp_status cvntcp_field_model_majority(int dimension, int radius,
                                                     double theta,
                                                     cvntcp_field_model** out);
CVNTCP_API cvntcp_status cvntcp_field_model_levels(int dimension, int radius,
                                                   double theta, int levels,
                                                   cvntcp_field_model** out);
CVNTCP_API void cvntcp_field_model_destroy(cvntcp_field_model* model);

CVNTCP_API int cvntcp_field_model_dimension(const cvntcp_field_model* model);
/* Writes the model descriptor JSON into buf (NUL-terminated, truncated to
 * size) and the untruncated length into *length when length is not NULL. */
CVNTCP_API cvntcp_status cvntcp_field_model_describe(
    const cvntcp_field_model* model, char* buf, size_t size, size_t* length);

CVNTCP_API cvntcp_status cvntcp_model_mean(const cvntcp_field_model* model,
                                           double* out);
CVNTCP_API cvntcp_status cvntcp_covariance_at_lag(
    const cvntcp_field_model* model, const int64_t* lag, size_t lag_size,
    double* out);
/* Fails with CVNTCP_ERR_DEGENERATE when sigma^2 is zero; *out and
 * *degenerate are written either way. */
CVNTCP_API cvntcp_status cvntcp_model_sigma2(const cvntcp_field_model* model,
                                             double* out, int* degenerate);

CVNTCP_API cvntcp_status cvntcp_sample_field(const cvntcp_field_model* model,
                                             int64_t half_width, uint64_t seed,
                                             cvntcp_field_sample** out);
CVNTCP_API void cvntcp_field_sample_destroy(cvntcp_field_sample* sample);

CVNTCP_API int cvntcp_field_sample_dimension(const cvntcp_field_sample* sample);
CVNTCP_API int64_t cvntcp_field_sample_half_width(
    const cvntcp_field_sample* sample);
CVNTCP_API uint64_t cvntcp_field_sample_seed(const cvntcp_field_sample* sample);
CVNTCP_API size_t cvntcp_field_sample_size(const cvntcp_field_sample* sample);
/* Borrowed pointer to the row-major values; valid while the sample lives. */
CVNTCP_API const double* cvntcp_field_sample_values(
    const cvntcp_field_sample* sample);
/* New model handle equal to the sample's provenance model. */
CVNTCP_API cvntcp_status cvntcp_field_sample_model(
    const cvntcp_field_sample* sample, cvntcp_field_model** out);

CVNTCP_API cvntcp_status cvntcp_field_sample_save(
    const cvntcp_field_sample* sample, const char* path,
    cvntcp_sample_encoding encoding);
CVNTCP_API cvntcp_status cvntcp_field_sample_load(const char* path,
                                                  cvntcp_field_sample** out);

/* ---- estimation --------------------------------------------------------- */

typedef struct cvntcp_normalized_statistic {
  double value;
  int estimated;
  double sum;
  double mean;
  double variance;
  int64_t cube_size;
} cvntcp_normalized_statistic;

/* Bandwidth arguments: b >= 1 fixes the block radius, b == 0 selects
 * default_bandwidth(n). */
CVNTCP_API int64_t cvntcp_default_bandwidth(int64_t n);

/* lo/hi are inclusive site coordinates with `dimension` entries each; pass
 * NULL for both to sum the whole cube. */
CVNTCP_API cvntcp_status cvntcp_partial_sum(const cvntcp_field_sample* sample,
                                            const int64_t* lo,
                                            const int64_t* hi, double* out);
CVNTCP_API cvntcp_status cvntcp_variance_estimator(
    const cvntcp_field_sample* sample, int64_t bandwidth, double* out);
/* true_sigma2 > 0 selects true-sigma normalisation; 0 selects the
 * estimated variance. */
CVNTCP_API cvntcp_status cvntcp_self_normalized_statistic(
    const cvntcp_field_sample* sample, double mean, int64_t bandwidth,
    double true_sigma2, cvntcp_normalized_statistic* out);
CVNTCP_API cvntcp_status cvntcp_confidence_interval(
    const cvntcp_field_sample* sample, double level, int64_t bandwidth,
    double* lo, double* hi);
CVNTCP_API cvntcp_status cvntcp_ntcp_estimate(const cvntcp_field_sample* sample,
                                              double x, double mean,
                                              int64_t bandwidth, double* out);

/* ---- experiments -------------------------------------------------------- */

CVNTCP_API cvntcp_status cvntcp_ks_distance(const double* values, size_t count,
                                            double* out);
CVNTCP_API cvntcp_status cvntcp_fit_rate(const int64_t* n, const double* ks,
                                         size_t count, int dimension,
                                         double* exponent, int* clamped);

/* Runs the campaign described by the JSON config at config_path, writes the
 * report CSV to csv_path and, when metadata_path is not NULL, the JSON
 * metadata sidecar. threads > 0 overrides the config's thread count. */
CVNTCP_API cvntcp_status cvntcp_run_experiment_file(const char* config_path,
                                                    const char* csv_path,
                                                    const char* metadata_path,
                                                    unsigned threads);

#ifdef __cplusplus
}
#endif

#endif /* CVNTCP_H */
