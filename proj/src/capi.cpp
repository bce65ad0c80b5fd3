// Copyright 2026 The cvntcp Authors
// SPDX-License-Identifier: Apache-2.0
#include "cvntcp/cvntcp.h"

#include <cstring>
#include <fstream>
#include <new>
#include <string>

#include "cvntcp/cv_ntcp.hpp"
#include "cvntcp/dependent_clt.hpp"
#include "cvntcp/dose_response.hpp"
#include "cvntcp/error.hpp"
#include "cvntcp/experiment.hpp"
#include "cvntcp/field_io.hpp"
#include "cvntcp/lattice.hpp"
#include "cvntcp/normal.hpp"

struct cvntcp_dose_model {
  cvntcp::DoseResponseModel model;
};

struct cvntcp_field_model {
  cvntcp::FieldModel model;
};

struct cvntcp_field_sample {
  cvntcp::FieldSample sample;
};

namespace {

thread_local std::string last_error;

cvntcp_status status_for(cvntcp::ErrorKind kind) {
  using cvntcp::ErrorKind;
  switch (kind) {
    case ErrorKind::Parameter: return CVNTCP_ERR_PARAMETER;
    case ErrorKind::Domain: return CVNTCP_ERR_DOMAIN;
    case ErrorKind::Shape: return CVNTCP_ERR_SHAPE;
    case ErrorKind::Degenerate: return CVNTCP_ERR_DEGENERATE;
    case ErrorKind::Unattainable: return CVNTCP_ERR_UNATTAINABLE;
    case ErrorKind::Capacity: return CVNTCP_ERR_CAPACITY;
    case ErrorKind::Io: return CVNTCP_ERR_IO;
    case ErrorKind::Config: return CVNTCP_ERR_CONFIG;
  }
  return CVNTCP_ERR_INTERNAL;
}

cvntcp_status set_error(cvntcp_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs body, translating exceptions into status codes.
template <class Body>
cvntcp_status guarded(Body&& body) noexcept {
  try {
    body();
    return CVNTCP_OK;
  } catch (const cvntcp::Error& e) {
    return set_error(status_for(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(CVNTCP_ERR_CAPACITY, "out of memory");
  } catch (const std::exception& e) {
    return set_error(CVNTCP_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(CVNTCP_ERR_INTERNAL, "unknown exception");
  }
}

#define CVNTCP_REQUIRE(ptr)                                               \
  do {                                                                    \
    if ((ptr) == nullptr)                                                 \
      return set_error(CVNTCP_ERR_NULL_ARGUMENT, #ptr " must not be NULL"); \
  } while (0)

cvntcp::EstimatorConfig bandwidth_config(std::int64_t bandwidth) {
  if (bandwidth < 0)
    cvntcp::fail(cvntcp::ErrorKind::Parameter, "bandwidth must be >= 0");
  return bandwidth == 0 ? cvntcp::EstimatorConfig{}
                        : cvntcp::EstimatorConfig::fixed(bandwidth);
}

void copy_approx(const cvntcp::ApproxResult& r, cvntcp_approx* out) {
  out->value = r.value;
  out->certified = r.certified() ? 1 : 0;
  out->error_bound = r.error_bound.value_or(-1.0);
  out->method = static_cast<cvntcp_method>(r.method);
}

}  // namespace

extern "C" {

const char* cvntcp_last_error(void) { return last_error.c_str(); }

const char* cvntcp_status_name(cvntcp_status status) {
  switch (status) {
    case CVNTCP_OK: return "ok";
    case CVNTCP_ERR_PARAMETER: return "parameter error";
    case CVNTCP_ERR_DOMAIN: return "domain error";
    case CVNTCP_ERR_SHAPE: return "shape error";
    case CVNTCP_ERR_DEGENERATE: return "degenerate distribution";
    case CVNTCP_ERR_UNATTAINABLE: return "unattainable target";
    case CVNTCP_ERR_CAPACITY: return "capacity error";
    case CVNTCP_ERR_IO: return "I/O error";
    case CVNTCP_ERR_CONFIG: return "configuration error";
    case CVNTCP_ERR_NULL_ARGUMENT: return "null argument";
    case CVNTCP_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* cvntcp_version(void) { return "1.0.0"; }

// ---- dose response --------------------------------------------------------

cvntcp_status cvntcp_dose_model_create(cvntcp_dose_kind kind, double alpha,
                                       double beta, int targets,
                                       cvntcp_dose_model** out) {
  CVNTCP_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    using cvntcp::DoseModelKind;
    if (kind < CVNTCP_SINGLE_HIT || kind > CVNTCP_LINEAR_QUADRATIC)
      cvntcp::fail(cvntcp::ErrorKind::Parameter, "unknown dose model kind");
    cvntcp::DoseResponseModel m{static_cast<DoseModelKind>(kind), alpha, beta,
                                targets};
    if (kind == CVNTCP_SINGLE_HIT || kind == CVNTCP_LINEAR_QUADRATIC)
      m.targets = 1;
    if (kind == CVNTCP_SINGLE_HIT || kind == CVNTCP_MULTI_TARGET) m.beta = 0.0;
    m.validate();
    *out = new cvntcp_dose_model{m};
  });
}

void cvntcp_dose_model_destroy(cvntcp_dose_model* model) { delete model; }

cvntcp_status cvntcp_surviving_fraction(const cvntcp_dose_model* model,
                                        double dose, double* out) {
  CVNTCP_REQUIRE(model);
  CVNTCP_REQUIRE(out);
  return guarded([&] { *out = cvntcp::surviving_fraction(model->model, dose); });
}

cvntcp_status cvntcp_fsu_kill_probability(const cvntcp_dose_model* model,
                                          int64_t cells, double dose,
                                          double* out) {
  CVNTCP_REQUIRE(model);
  CVNTCP_REQUIRE(out);
  return guarded([&] {
    *out = cvntcp::fsu_kill_probability(model->model, {cells}, dose);
  });
}

cvntcp_status cvntcp_dose_for_kill_probability(const cvntcp_dose_model* model,
                                               int64_t cells, double target,
                                               double tolerance, double* out) {
  CVNTCP_REQUIRE(model);
  CVNTCP_REQUIRE(out);
  return guarded([&] {
    *out = cvntcp::dose_for_kill_probability(model->model, {cells}, target,
                                             tolerance);
  });
}

cvntcp_status cvntcp_dose_for_fraction(const cvntcp_dose_model* model,
                                       int64_t cells, double kappa, int64_t n,
                                       double gamma, double tolerance,
                                       double* out) {
  CVNTCP_REQUIRE(model);
  CVNTCP_REQUIRE(out);
  return guarded([&] {
    *out = cvntcp::dose_for_fraction(model->model, {cells}, kappa, n, gamma,
                                     tolerance);
  });
}

// ---- critical-volume NTCP ------------------------------------------------

double cvntcp_normal_cdf(double x) { return cvntcp::normal_cdf(x); }

cvntcp_status cvntcp_normal_quantile(double probability, double* out) {
  CVNTCP_REQUIRE(out);
  return guarded([&] { *out = cvntcp::normal_quantile(probability); });
}

cvntcp_status cvntcp_ntcp_exact(int64_t n, double p, int64_t threshold,
                                double* out) {
  CVNTCP_REQUIRE(out);
  return guarded([&] { *out = cvntcp::ntcp_exact(n, p, threshold); });
}

cvntcp_status cvntcp_ntcp_normal(int64_t n, double p, double x,
                                 cvntcp_approx* out) {
  CVNTCP_REQUIRE(out);
  return guarded([&] { copy_approx(cvntcp::ntcp_normal(n, p, x), out); });
}

cvntcp_status cvntcp_ntcp_normal_integer_threshold(int64_t n, double p,
                                                   double gamma,
                                                   int64_t* threshold,
                                                   cvntcp_approx* out) {
  CVNTCP_REQUIRE(threshold);
  CVNTCP_REQUIRE(out);
  return guarded([&] {
    const auto r = cvntcp::ntcp_normal_integer_threshold(n, p, gamma);
    *threshold = r.threshold;
    copy_approx(r.approx, out);
  });
}

cvntcp_status cvntcp_ntcp_weiss(int64_t n, double p, int64_t k, int64_t m,
                                cvntcp_approx* out) {
  CVNTCP_REQUIRE(out);
  return guarded([&] { copy_approx(cvntcp::ntcp_weiss(n, p, k, m), out); });
}

cvntcp_status cvntcp_threshold_for_confidence(int64_t n, double p, double gamma,
                                              double* out) {
  CVNTCP_REQUIRE(out);
  return guarded([&] { *out = cvntcp::threshold_for_confidence(n, p, gamma); });
}

cvntcp_status cvntcp_kill_fraction(double p, double c, double* out) {
  CVNTCP_REQUIRE(out);
  return guarded([&] { *out = cvntcp::kill_fraction(p, c); });
}

cvntcp_status cvntcp_fraction_curve_features(double c,
                                             cvntcp_fraction_features* out) {
  CVNTCP_REQUIRE(out);
  return guarded([&] {
    const auto f = cvntcp::fraction_curve_features(c);
    *out = {f.p1, f.p_star, f.kappa_star, f.c};
  });
}

cvntcp_status cvntcp_invert_fraction(double kappa, double c, double* out) {
  CVNTCP_REQUIRE(out);
  return guarded([&] { *out = cvntcp::invert_fraction(kappa, c); });
}

cvntcp_status cvntcp_damage_volume(int64_t n, double total_volume,
                                   const double* fsu_volumes,
                                   const uint8_t* states, size_t state_count,
                                   double* out) {
  CVNTCP_REQUIRE(out);
  if (state_count > 0) CVNTCP_REQUIRE(states);
  return guarded([&] {
    cvntcp::OrganSpec organ;
    organ.n = n;
    organ.volume = total_volume;
    if (fsu_volumes != nullptr && n > 0)
      organ.fsu_volumes.assign(fsu_volumes, fsu_volumes + n);
    *out = cvntcp::damage_volume(organ, {states, state_count});
  });
}

// ---- lattice fields -------------------------------------------------------

cvntcp_status cvntcp_field_model_iid(int dimension, double p,
                                     cvntcp_field_model** out) {
  CVNTCP_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    *out = new cvntcp_field_model{cvntcp::FieldModel::iid(dimension, p)};
  });
}

cvntcp_status cvntcp_field_model_threshold(int dimension, int radius,
                                           double theta, int64_t k_min,
                                           cvntcp_field_model** out) {
  CVNTCP_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    *out = new cvntcp_field_model{
        cvntcp::FieldModel::threshold(dimension, radius, theta, k_min)};
  });
}

cvntcp_status cvntcp_field_model_majority(int dimension, int radius,
                                          double theta,
                                          cvntcp_field_model** out) {
  CVNTCP_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    *out = new cvntcp_field_model{
        cvntcp::FieldModel::majority(dimension, radius, theta)};
  });
}

cvntcp_status cvntcp_field_model_levels(int dimension, int radius, double theta,
                                        int levels, cvntcp_field_model** out) {
  CVNTCP_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    *out = new cvntcp_field_model{
        cvntcp::FieldModel::levels(dimension, radius, theta, levels)};
  });
}

void cvntcp_field_model_destroy(cvntcp_field_model* model) { delete model; }

int cvntcp_field_model_dimension(const cvntcp_field_model* model) {
  return model ? model->model.dimension : 0;
}

cvntcp_status cvntcp_field_model_describe(const cvntcp_field_model* model,
                                          char* buf, size_t size,
                                          size_t* length) {
  CVNTCP_REQUIRE(model);
  return guarded([&] {
    const std::string text = model->model.to_json();
    if (length) *length = text.size();
    if (buf && size > 0) {
      const std::size_t n = std::min(size - 1, text.size());
      std::memcpy(buf, text.data(), n);
      buf[n] = '\0';
    }
  });
}

cvntcp_status cvntcp_model_mean(const cvntcp_field_model* model, double* out) {
  CVNTCP_REQUIRE(model);
  CVNTCP_REQUIRE(out);
  return guarded([&] { *out = cvntcp::model_mean(model->model); });
}

cvntcp_status cvntcp_covariance_at_lag(const cvntcp_field_model* model,
                                       const int64_t* lag, size_t lag_size,
                                       double* out) {
  CVNTCP_REQUIRE(model);
  CVNTCP_REQUIRE(lag);
  CVNTCP_REQUIRE(out);
  return guarded([&] {
    *out = cvntcp::covariance_at_lag(
        model->model, std::span<const std::int64_t>(lag, lag_size));
  });
}

cvntcp_status cvntcp_model_sigma2(const cvntcp_field_model* model, double* out,
                                  int* degenerate) {
  CVNTCP_REQUIRE(model);
  CVNTCP_REQUIRE(out);
  CVNTCP_REQUIRE(degenerate);
  return guarded([&] {
    const auto s = cvntcp::model_sigma2(model->model);
    *out = s.value;
    *degenerate = s.degenerate ? 1 : 0;
    if (s.degenerate)
      cvntcp::fail(cvntcp::ErrorKind::Degenerate, "model variance sigma^2 is zero");
  });
}

cvntcp_status cvntcp_sample_field(const cvntcp_field_model* model,
                                  int64_t half_width, uint64_t seed,
                                  cvntcp_field_sample** out) {
  CVNTCP_REQUIRE(model);
  CVNTCP_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    const cvntcp::LatticeCube cube{model->model.dimension, half_width};
    *out = new cvntcp_field_sample{cvntcp::sample_field(model->model, cube, seed)};
  });
}

void cvntcp_field_sample_destroy(cvntcp_field_sample* sample) { delete sample; }

int cvntcp_field_sample_dimension(const cvntcp_field_sample* sample) {
  return sample ? sample->sample.cube.dimension : 0;
}

int64_t cvntcp_field_sample_half_width(const cvntcp_field_sample* sample) {
  return sample ? sample->sample.cube.half_width : -1;
}

uint64_t cvntcp_field_sample_seed(const cvntcp_field_sample* sample) {
  return sample ? sample->sample.seed : 0;
}

size_t cvntcp_field_sample_size(const cvntcp_field_sample* sample) {
  return sample ? sample->sample.values.size() : 0;
}

const double* cvntcp_field_sample_values(const cvntcp_field_sample* sample) {
  return sample ? sample->sample.values.data() : nullptr;
}

cvntcp_status cvntcp_field_sample_model(const cvntcp_field_sample* sample,
                                        cvntcp_field_model** out) {
  CVNTCP_REQUIRE(sample);
  CVNTCP_REQUIRE(out);
  return guarded([&] { *out = new cvntcp_field_model{sample->sample.model}; });
}

cvntcp_status cvntcp_field_sample_save(const cvntcp_field_sample* sample,
                                       const char* path,
                                       cvntcp_sample_encoding encoding) {
  CVNTCP_REQUIRE(sample);
  CVNTCP_REQUIRE(path);
  return guarded([&] {
    cvntcp::save_field_sample(sample->sample, path,
                              encoding == CVNTCP_ENCODING_CSV
                                  ? cvntcp::SampleEncoding::Csv
                                  : cvntcp::SampleEncoding::Binary);
  });
}

cvntcp_status cvntcp_field_sample_load(const char* path,
                                       cvntcp_field_sample** out) {
  CVNTCP_REQUIRE(path);
  CVNTCP_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    *out = new cvntcp_field_sample{cvntcp::load_field_sample(path)};
  });
}

// ---- estimation -----------------------------------------------------------

int64_t cvntcp_default_bandwidth(int64_t n) {
  return n < 1 ? 1 : cvntcp::default_bandwidth(n);
}

cvntcp_status cvntcp_partial_sum(const cvntcp_field_sample* sample,
                                 const int64_t* lo, const int64_t* hi,
                                 double* out) {
  CVNTCP_REQUIRE(sample);
  CVNTCP_REQUIRE(out);
  if ((lo == nullptr) != (hi == nullptr))
    return set_error(CVNTCP_ERR_NULL_ARGUMENT,
                     "lo and hi must both be given or both be NULL");
  return guarded([&] {
    if (lo == nullptr) {
      *out = cvntcp::partial_sum(sample->sample);
      return;
    }
    cvntcp::Box box;
    for (int k = 0; k < sample->sample.cube.dimension; ++k) {
      box.lo[k] = lo[k];
      box.hi[k] = hi[k];
    }
    *out = cvntcp::partial_sum(sample->sample, box);
  });
}

cvntcp_status cvntcp_variance_estimator(const cvntcp_field_sample* sample,
                                        int64_t bandwidth, double* out) {
  CVNTCP_REQUIRE(sample);
  CVNTCP_REQUIRE(out);
  return guarded([&] {
    *out = cvntcp::variance_estimator(sample->sample, bandwidth_config(bandwidth));
  });
}

cvntcp_status cvntcp_self_normalized_statistic(
    const cvntcp_field_sample* sample, double mean, int64_t bandwidth,
    double true_sigma2, cvntcp_normalized_statistic* out) {
  CVNTCP_REQUIRE(sample);
  CVNTCP_REQUIRE(out);
  return guarded([&] {
    cvntcp::Normalization mode = cvntcp::Estimated{};
    if (true_sigma2 > 0.0) mode = cvntcp::TrueSigma{true_sigma2};
    else if (true_sigma2 < 0.0)
      cvntcp::fail(cvntcp::ErrorKind::Domain, "true sigma^2 must be >= 0");
    const auto s = cvntcp::self_normalized_statistic(
        sample->sample, mean, bandwidth_config(bandwidth), mode);
    *out = {s.value, s.estimated ? 1 : 0, s.sum, s.mean, s.variance, s.cube_size};
  });
}

cvntcp_status cvntcp_confidence_interval(const cvntcp_field_sample* sample,
                                         double level, int64_t bandwidth,
                                         double* lo, double* hi) {
  CVNTCP_REQUIRE(sample);
  CVNTCP_REQUIRE(lo);
  CVNTCP_REQUIRE(hi);
  return guarded([&] {
    const auto iv = cvntcp::confidence_interval(sample->sample, level,
                                                bandwidth_config(bandwidth));
    *lo = iv.lo;
    *hi = iv.hi;
  });
}

cvntcp_status cvntcp_ntcp_estimate(const cvntcp_field_sample* sample, double x,
                                   double mean, int64_t bandwidth, double* out) {
  CVNTCP_REQUIRE(sample);
  CVNTCP_REQUIRE(out);
  return guarded([&] {
    *out = cvntcp::ntcp_estimate(sample->sample, x, mean,
                                 bandwidth_config(bandwidth));
  });
}

// ---- experiments ----------------------------------------------------------

cvntcp_status cvntcp_ks_distance(const double* values, size_t count,
                                 double* out) {
  CVNTCP_REQUIRE(out);
  if (count > 0) CVNTCP_REQUIRE(values);
  return guarded([&] { *out = cvntcp::ks_distance({values, count}); });
}

cvntcp_status cvntcp_fit_rate(const int64_t* n, const double* ks, size_t count,
                              int dimension, double* exponent, int* clamped) {
  CVNTCP_REQUIRE(exponent);
  if (count > 0) {
    CVNTCP_REQUIRE(n);
    CVNTCP_REQUIRE(ks);
  }
  return guarded([&] {
    std::vector<cvntcp::RatePoint> points;
    for (std::size_t i = 0; i < count; ++i) points.push_back({n[i], ks[i]});
    const auto fit = cvntcp::fit_rate(points, dimension);
    *exponent = fit.exponent;
    if (clamped) *clamped = fit.clamped ? 1 : 0;
  });
}

cvntcp_status cvntcp_run_experiment_file(const char* config_path,
                                         const char* csv_path,
                                         const char* metadata_path,
                                         unsigned threads) {
  CVNTCP_REQUIRE(config_path);
  CVNTCP_REQUIRE(csv_path);
  return guarded([&] {
    auto config = cvntcp::ExperimentConfig::load(config_path);
    if (threads > 0) config.threads = threads;
    const auto report = cvntcp::run_clt_experiment(config);
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv)
      cvntcp::fail(cvntcp::ErrorKind::Io,
                   std::string("cannot open '") + csv_path + "' for writing");
    report.write_csv(csv);
    if (!csv)
      cvntcp::fail(cvntcp::ErrorKind::Io,
                   std::string("failed writing '") + csv_path + "'");
    if (metadata_path) {
      std::ofstream meta(metadata_path, std::ios::binary);
      if (!meta)
        cvntcp::fail(cvntcp::ErrorKind::Io, std::string("cannot open '") +
                                                metadata_path + "' for writing");
      meta << report.metadata_json() << '\n';
    }
  });
}

}  // extern "C"
