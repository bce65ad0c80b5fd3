// Copyright 2026 The cvntcp Authors
// SPDX-License-Identifier: Apache-2.0
//
// Exercises the shared library through its C interface only.
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cvntcp/cvntcp.h"

namespace {
struct ModelHandle {
  cvntcp_field_model* p = nullptr;
  ~ModelHandle() { cvntcp_field_model_destroy(p); }
};
struct SampleHandle {
  cvntcp_field_sample* p = nullptr;
  ~SampleHandle() { cvntcp_field_sample_destroy(p); }
};
struct DoseHandle {
  cvntcp_dose_model* p = nullptr;
  ~DoseHandle() { cvntcp_dose_model_destroy(p); }
};

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}
}  // namespace

TEST_CASE("status plumbing") {
  CHECK(std::string(cvntcp_version()) == "1.0.0");
  CHECK(std::string(cvntcp_status_name(CVNTCP_OK)) == "ok");
  double v = 0;
  CHECK(cvntcp_ntcp_exact(10, 0.5, 12, &v) == CVNTCP_ERR_DOMAIN);
  CHECK(std::string(cvntcp_last_error()).size() > 0);
  CHECK(cvntcp_ntcp_exact(10, 0.5, 5, nullptr) == CVNTCP_ERR_NULL_ARGUMENT);
  CHECK(cvntcp_ntcp_exact(10, 0.5, 5, &v) == CVNTCP_OK);
  CHECK(v == 0.623046875);
  cvntcp_field_model_destroy(nullptr);
  cvntcp_field_sample_destroy(nullptr);
  cvntcp_dose_model_destroy(nullptr);
}

TEST_CASE("dose response through the C API") {
  DoseHandle m;
  REQUIRE(cvntcp_dose_model_create(CVNTCP_SINGLE_HIT, 1.0, 0.0, 1, &m.p) == CVNTCP_OK);
  double v = 0;
  CHECK(cvntcp_surviving_fraction(m.p, std::log(2.0), &v) == CVNTCP_OK);
  CHECK(v == doctest::Approx(0.5));
  CHECK(cvntcp_fsu_kill_probability(m.p, 3, std::log(2.0), &v) == CVNTCP_OK);
  CHECK(v == doctest::Approx(0.125));
  CHECK(cvntcp_dose_for_kill_probability(m.p, 1, 0.5, 1e-12, &v) == CVNTCP_OK);
  CHECK(v == doctest::Approx(std::log(2.0)));
  CHECK(cvntcp_dose_for_fraction(m.p, 1, 0.5, 100, 0.5, 1e-12, &v) == CVNTCP_OK);
  CHECK(v == doctest::Approx(std::log(2.0)));
  CHECK(cvntcp_dose_for_kill_probability(m.p, 1, 1.0, 1e-12, &v) == CVNTCP_ERR_DOMAIN);
  DoseHandle bad;
  CHECK(cvntcp_dose_model_create(CVNTCP_MULTI_TARGET, 1.0, 0.0, 0, &bad.p) ==
        CVNTCP_ERR_PARAMETER);
  CHECK(bad.p == nullptr);
  DoseHandle tiny;
  REQUIRE(cvntcp_dose_model_create(CVNTCP_SINGLE_HIT, 1e-30, 0.0, 1, &tiny.p) == CVNTCP_OK);
  CHECK(cvntcp_dose_for_kill_probability(tiny.p, 1, 0.5, 1e-9, &v) ==
        CVNTCP_ERR_UNATTAINABLE);
}

TEST_CASE("NTCP calculators through the C API") {
  cvntcp_approx a{};
  CHECK(cvntcp_ntcp_normal(100, 0.5, 50, &a) == CVNTCP_OK);
  CHECK(a.value == 0.5);
  CHECK(a.certified == 1);
  CHECK(a.error_bound == doctest::Approx(0.1595));
  CHECK(a.method == CVNTCP_METHOD_NORMAL);
  std::int64_t L = 0;
  CHECK(cvntcp_ntcp_normal_integer_threshold(100, 0.5, 0.5, &L, &a) == CVNTCP_OK);
  CHECK(L == 50);
  CHECK(a.error_bound == doctest::Approx(0.23929).epsilon(1e-4));
  CHECK(cvntcp_ntcp_weiss(20, 0.5, 5, 10, &a) == CVNTCP_OK);
  CHECK(a.certified == 0);
  CHECK(cvntcp_ntcp_weiss(100, 0.5, 50, 100, &a) == CVNTCP_OK);
  CHECK(a.certified == 1);
  CHECK(cvntcp_ntcp_normal(10, 0.0, 5, &a) == CVNTCP_ERR_DEGENERATE);
  double v = 0;
  CHECK(cvntcp_threshold_for_confidence(100, 0.2, 0.975, &v) == CVNTCP_OK);
  CHECK(v == doctest::Approx(27.839856).epsilon(1e-7));
  CHECK(cvntcp_kill_fraction(0.5, 1.0, &v) == CVNTCP_OK);
  CHECK(v == 1.0);
  cvntcp_fraction_features f{};
  CHECK(cvntcp_fraction_curve_features(1.0, &f) == CVNTCP_OK);
  CHECK(f.p_star == doctest::Approx(0.8535534));
  CHECK(cvntcp_invert_fraction(0.5, 1.0, &v) == CVNTCP_OK);
  CHECK(v == doctest::Approx(0.1464466));
  CHECK(cvntcp_normal_cdf(0.0) == 0.5);
  CHECK(cvntcp_normal_quantile(0.975, &v) == CVNTCP_OK);
  CHECK(v == doctest::Approx(1.959964));

  const std::uint8_t states[10] = {1, 1, 1, 0, 0, 0, 0, 0, 0, 0};
  CHECK(cvntcp_damage_volume(10, 1.0, nullptr, states, 10, &v) == CVNTCP_OK);
  CHECK(v == doctest::Approx(0.3));
  const double vols[3] = {1, 2, 3};
  CHECK(cvntcp_damage_volume(3, 6.0, vols, states, 3, &v) == CVNTCP_OK);
  CHECK(v == 6.0);
  CHECK(cvntcp_damage_volume(10, 1.0, nullptr, states, 9, &v) == CVNTCP_ERR_SHAPE);
}

TEST_CASE("fields and estimators through the C API") {
  ModelHandle m;
  REQUIRE(cvntcp_field_model_majority(1, 1, 0.5, &m.p) == CVNTCP_OK);
  CHECK(cvntcp_field_model_dimension(m.p) == 1);
  std::size_t len = 0;
  char buf[8];
  CHECK(cvntcp_field_model_describe(m.p, buf, sizeof buf, &len) == CVNTCP_OK);
  CHECK(len > sizeof buf);
  CHECK(buf[sizeof buf - 1] == '\0');
  std::vector<char> full(len + 1);
  CHECK(cvntcp_field_model_describe(m.p, full.data(), full.size(), nullptr) == CVNTCP_OK);
  CHECK(std::string(full.data()).find("moving_window_threshold") != std::string::npos);

  double v = 0;
  CHECK(cvntcp_model_mean(m.p, &v) == CVNTCP_OK);
  CHECK(v == doctest::Approx(0.5));
  const std::int64_t lag1[1] = {1};
  CHECK(cvntcp_covariance_at_lag(m.p, lag1, 1, &v) == CVNTCP_OK);
  CHECK(v == doctest::Approx(0.125));
  CHECK(cvntcp_covariance_at_lag(m.p, lag1, 2, &v) == CVNTCP_ERR_SHAPE);
  int degenerate = -1;
  CHECK(cvntcp_model_sigma2(m.p, &v, &degenerate) == CVNTCP_OK);
  CHECK(v == doctest::Approx(0.625));
  CHECK(degenerate == 0);

  ModelHandle flat;
  REQUIRE(cvntcp_field_model_majority(1, 1, 0.0, &flat.p) == CVNTCP_OK);
  CHECK(cvntcp_model_sigma2(flat.p, &v, &degenerate) == CVNTCP_ERR_DEGENERATE);
  CHECK(degenerate == 1);
  CHECK(v == 0.0);

  SampleHandle s;
  REQUIRE(cvntcp_sample_field(m.p, 100, 42, &s.p) == CVNTCP_OK);
  CHECK(cvntcp_field_sample_dimension(s.p) == 1);
  CHECK(cvntcp_field_sample_half_width(s.p) == 100);
  CHECK(cvntcp_field_sample_seed(s.p) == 42);
  REQUIRE(cvntcp_field_sample_size(s.p) == 201);
  const double* values = cvntcp_field_sample_values(s.p);
  double manual = 0;
  for (int i = 0; i < 201; ++i) manual += values[i];
  CHECK(cvntcp_partial_sum(s.p, nullptr, nullptr, &v) == CVNTCP_OK);
  CHECK(v == manual);
  const std::int64_t lo[1] = {-100}, hi[1] = {0};
  CHECK(cvntcp_partial_sum(s.p, lo, hi, &v) == CVNTCP_OK);
  double left = 0;
  for (int i = 0; i <= 100; ++i) left += values[i];
  CHECK(v == doctest::Approx(left));
  const std::int64_t bad_hi[1] = {101};
  CHECK(cvntcp_partial_sum(s.p, lo, bad_hi, &v) == CVNTCP_ERR_SHAPE);

  double c0 = 0, c5 = 0;
  CHECK(cvntcp_variance_estimator(s.p, 0, &c0) == CVNTCP_OK);
  CHECK(cvntcp_variance_estimator(s.p, cvntcp_default_bandwidth(100), &c5) == CVNTCP_OK);
  CHECK(c0 == c5);
  cvntcp_normalized_statistic st{};
  CHECK(cvntcp_self_normalized_statistic(s.p, 0.5, 0, 0.0, &st) == CVNTCP_OK);
  CHECK(st.estimated == 1);
  CHECK(st.variance == c0);
  CHECK(st.value == doctest::Approx((manual - 201 * 0.5) / std::sqrt(c0 * 201)));
  CHECK(cvntcp_self_normalized_statistic(s.p, 0.5, 0, 0.625, &st) == CVNTCP_OK);
  CHECK(st.estimated == 0);
  double ilo = 0, ihi = 0;
  CHECK(cvntcp_confidence_interval(s.p, 0.95, 0, &ilo, &ihi) == CVNTCP_OK);
  CHECK(ilo < manual / 201);
  CHECK(ihi > manual / 201);
  CHECK(cvntcp_ntcp_estimate(s.p, 201 * 0.5, 0.5, 0, &v) == CVNTCP_OK);
  CHECK(v == doctest::Approx(0.5));

  ModelHandle back_model;
  CHECK(cvntcp_field_sample_model(s.p, &back_model.p) == CVNTCP_OK);
  CHECK(cvntcp_field_model_dimension(back_model.p) == 1);

  const auto dir = std::filesystem::temp_directory_path();
  for (auto enc : {CVNTCP_ENCODING_BINARY, CVNTCP_ENCODING_CSV}) {
    const auto path = (dir / ("cvntcp_capi_" + std::to_string(enc) + ".field")).string();
    CHECK(cvntcp_field_sample_save(s.p, path.c_str(), enc) == CVNTCP_OK);
    SampleHandle loaded;
    REQUIRE(cvntcp_field_sample_load(path.c_str(), &loaded.p) == CVNTCP_OK);
    REQUIRE(cvntcp_field_sample_size(loaded.p) == 201);
    const double* lv = cvntcp_field_sample_values(loaded.p);
    for (int i = 0; i < 201; ++i) CHECK(lv[i] == values[i]);
    CHECK(cvntcp_field_sample_seed(loaded.p) == 42);
    std::filesystem::remove(path);
  }
  SampleHandle missing;
  CHECK(cvntcp_field_sample_load("/nonexistent/x.field", &missing.p) == CVNTCP_ERR_IO);
  CHECK(missing.p == nullptr);

  ModelHandle big;
  REQUIRE(cvntcp_field_model_iid(3, 0.5, &big.p) == CVNTCP_OK);
  SampleHandle huge;
  CHECK(cvntcp_sample_field(big.p, 1000, 1, &huge.p) == CVNTCP_ERR_CAPACITY);
}

TEST_CASE("experiment instruments through the C API") {
  double v = 0;
  const double zero[1] = {0.0};
  CHECK(cvntcp_ks_distance(zero, 1, &v) == CVNTCP_OK);
  CHECK(v == 0.5);
  CHECK(cvntcp_ks_distance(zero, 0, &v) == CVNTCP_ERR_SHAPE);
  const std::int64_t ns[3] = {10, 40, 160};
  double ks[3];
  for (int i = 0; i < 3; ++i) ks[i] = 2.0 / std::sqrt(2.0 * ns[i] + 1);
  int clamped = -1;
  CHECK(cvntcp_fit_rate(ns, ks, 3, 1, &v, &clamped) == CVNTCP_OK);
  CHECK(v == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(clamped == 0);

  const auto dir = std::filesystem::temp_directory_path();
  const auto cfg = dir / "cvntcp_capi_config.json";
  std::ofstream(cfg) << R"({"model": {"type": "majority", "dimension": 1, "theta": 0.5},
    "n_schedule": [10, 40], "replicates": 50, "master_seed": 9, "levels": [0.9]})";
  const auto csv1 = dir / "cvntcp_capi_1.csv", csv2 = dir / "cvntcp_capi_2.csv";
  const auto meta = dir / "cvntcp_capi_1.meta.json";
  CHECK(cvntcp_run_experiment_file(cfg.c_str(), csv1.c_str(), meta.c_str(), 1) == CVNTCP_OK);
  CHECK(cvntcp_run_experiment_file(cfg.c_str(), csv2.c_str(), nullptr, 2) == CVNTCP_OK);
  CHECK(slurp(csv1) == slurp(csv2));
  CHECK(slurp(meta).find("\"replicates\": 50") != std::string::npos);
  CHECK(cvntcp_run_experiment_file("/nonexistent.json", csv1.c_str(), nullptr, 0) ==
        CVNTCP_ERR_IO);
  std::ofstream(cfg) << "{ broken";
  CHECK(cvntcp_run_experiment_file(cfg.c_str(), csv1.c_str(), nullptr, 0) == CVNTCP_ERR_CONFIG);
  for (const auto& p : {cfg, csv1, csv2, meta}) std::filesystem::remove(p);
}
