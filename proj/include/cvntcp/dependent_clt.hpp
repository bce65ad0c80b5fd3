// Copyright 2026 The cvntcp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "cvntcp/lattice.hpp"

namespace cvntcp {

/// Axis-aligned box of sites, inclusive bounds, in cube coordinates.
struct Box {
  Coord lo{};
  Coord hi{};
};

/// Block radius b used by the variance estimator: either fixed or the
/// schedule b_n = ceil(n^eta) with eta in (0, 1).
struct EstimatorConfig {
  std::optional<std::int64_t> bandwidth;
  double eta = 1.0 / 3.0;

  static EstimatorConfig fixed(std::int64_t b);
  static EstimatorConfig schedule(double eta);

  void validate() const;
  /// Bandwidth for a cube of half-width n.
  std::int64_t resolve(std::int64_t n) const;
};

/// ceil(n^(1/3)) clamped to [1, max(1, n-1)].
std::int64_t default_bandwidth(std::int64_t n);

/// ceil(n^eta), computed so that exact powers are not pushed up by rounding.
std::int64_t scheduled_bandwidth(std::int64_t n, double eta);

double partial_sum(const FieldSample& sample);
double partial_sum(const FieldSample& sample, const Box& region);

/// C(U) = |U|^-1 sum_j |Q_j| (S(Q_j)/|Q_j| - S(U)/|U|)^2 where Q_j is the
/// cube truncated to the sup-norm ball of radius b around j. No padding or
/// wraparound at the boundary.
double variance_estimator(const FieldSample& sample, std::int64_t bandwidth);
double variance_estimator(const FieldSample& sample,
                          const EstimatorConfig& config);

struct TrueSigma {
  double sigma2 = 0.0;
};
struct Estimated {};
using Normalization = std::variant<TrueSigma, Estimated>;

struct NormalizedStatistic {
  double value = 0.0;
  bool estimated = false;
  double sum = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  std::int64_t cube_size = 0;
};

/// (S(U) - |U| mean) / sqrt(variance |U|) with variance sigma^2 or C(U).
NormalizedStatistic self_normalized_statistic(const FieldSample& sample,
                                              double mean,
                                              const EstimatorConfig& config,
                                              const Normalization& mode);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return lo <= x && x <= hi; }
};

/// S(U)/|U| +- z_{(1+level)/2} sqrt(C(U)/|U|).
Interval confidence_interval(const FieldSample& sample, double level,
                             const EstimatorConfig& config);

/// 1 - Phi((x - |U| mean) / sqrt(C(U) |U|)). A random quantity: it estimates
/// P(S(U) >= x) from one realisation.
double ntcp_estimate(const FieldSample& sample, double x, double mean,
                     const EstimatorConfig& config);

/// Shape of the variance-gap envelope for dependence exponent lambda > d:
/// n^(d-lambda), (1 + ln n)/n or 1/n. m-dependent fields use lambda = inf.
double gap_envelope(double n, int dimension,
                    double lambda = std::numeric_limits<double>::infinity());

struct VarianceGapRow {
  std::int64_t n = 0;
  std::int64_t cube_size = 0;
  double variance_ratio = 0.0;  // sample Var(S(U_n)) / |U_n|
  double sigma2 = 0.0;
  double gap = 0.0;
  double envelope = 0.0;
};

/// Monte Carlo |Var(S(U_n))/|U_n| - sigma^2| along a schedule of
/// half-widths. Replicate r at half-width n uses replicate_seed(seed, n, r).
std::vector<VarianceGapRow> variance_gap(const FieldModel& model,
                                         std::span<const std::int64_t> schedule,
                                         std::int64_t replicates,
                                         std::uint64_t seed,
                                         unsigned threads = 0);

}  // namespace cvntcp
