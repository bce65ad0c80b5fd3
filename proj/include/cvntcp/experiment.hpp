// Copyright 2026 The cvntcp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "cvntcp/dependent_clt.hpp"
#include "cvntcp/lattice.hpp"

namespace cvntcp {

/// Monte Carlo campaign over a schedule of cube half-widths.
///
/// Config files are JSON objects:
///   {
///     "model":       {"type": "majority", "dimension": 1, "radius": 1,
///                     "theta": 0.5},
///     "n_schedule":  [200, 800, 3200],
///     "replicates":  2000,
///     "master_seed": 12345,
///     "bandwidth":   {"eta": 0.3333333333333333} | {"fixed": 4},
///     "mean":        "model" | {"hypothesized": 0.5},
///     "levels":      [0.5, 0.95],
///     "threads":     0
///   }
/// Only "model", "n_schedule" and "replicates" are required.
struct ExperimentConfig {
  FieldModel model;
  std::vector<std::int64_t> n_schedule;
  std::int64_t replicates = 2;
  std::uint64_t master_seed = 0;
  EstimatorConfig bandwidth;
  std::optional<double> hypothesized_mean;  // empty: model oracle mean
  std::vector<double> levels;
  unsigned threads = 0;  // 0: hardware concurrency; does not affect results

  void validate() const;
  std::string to_json() const;
  static ExperimentConfig from_json(const std::string& text);
  static ExperimentConfig load(const std::string& path);
};

enum class StatisticMode { TrueSigma, Estimated };

const char* to_string(StatisticMode mode) noexcept;

struct ReportRow {
  std::int64_t n = 0;
  std::int64_t cube_size = 0;
  StatisticMode mode = StatisticMode::Estimated;
  double ks = 0.0;
  double chat_mean = 0.0;
  double chat_sd = 0.0;
  double sigma2 = 0.0;
  std::optional<double> level;
  std::optional<double> coverage;
};

struct RateFit {
  double exponent = 0.0;
  bool clamped = false;  // some KS value was <= 0 and replaced by epsilon
};

struct ExperimentReport {
  ExperimentConfig config;
  double model_mean = 0.0;
  double mean_used = 0.0;
  double sigma2 = 0.0;
  std::vector<ReportRow> rows;
  std::optional<RateFit> true_sigma_rate;
  std::optional<RateFit> estimated_rate;

  /// Header `n,cube_size,mode,ks,chat_mean,chat_sd,sigma2,level,coverage`,
  /// numbers with 9 significant digits, empty cells for absent values.
  void write_csv(std::ostream& out) const;
  std::string metadata_json() const;
};

/// sup_x |F_emp(x) - Phi(x)|, evaluated at the jump points.
double ks_distance(std::span<const double> values);

struct RatePoint {
  std::int64_t n = 0;
  double ks = 0.0;
};

/// Negated least-squares slope of log(ks) against log|U_n|, |U_n| = (2n+1)^d.
RateFit fit_rate(std::span<const RatePoint> points, int dimension);

ExperimentReport run_clt_experiment(const ExperimentConfig& config);

struct ConsistencyRow {
  std::int64_t n = 0;
  std::int64_t bandwidth = 0;
  double chat_mean = 0.0;
  double chat_sd = 0.0;
  double median_abs_dev = 0.0;  // median over replicates of |C - sigma^2|
};

struct ConsistencySummary {
  double sigma2 = 0.0;
  std::vector<ConsistencyRow> rows;
  int decreasing_steps = 0;
  bool monotone_decreasing = false;
};

ConsistencySummary estimator_consistency(const ExperimentConfig& config);

struct CoverageRow {
  std::int64_t n = 0;
  double level = 0.0;
  double coverage = 0.0;
};

/// Fraction of replicate intervals containing the model mean. Requires the
/// model oracle as mean source.
std::vector<CoverageRow> coverage_study(const ExperimentConfig& config);

}  // namespace cvntcp
