// Copyright 2026 The cvntcp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace cvntcp {

inline constexpr int kMaxDimension = 3;

/// Integer cube U_n = [-n, n]^d.
struct LatticeCube {
  int dimension = 1;
  std::int64_t half_width = 0;

  void validate() const;
  std::int64_t side() const { return 2 * half_width + 1; }
  std::int64_t size() const;
};

using Coord = std::array<std::int64_t, kMaxDimension>;

/// Independent Bernoulli(p) FSU states.
struct IidBernoulli {
  double p = 0.5;
};

/// X_j = 1{number of noise hits in the sup-norm window of radius m around j
/// is at least k_min}, with Bernoulli(theta) noise per site.
struct MovingWindowThreshold {
  int radius = 1;
  double theta = 0.5;
  std::int64_t k_min = 2;
};

/// X_j = window hit fraction rounded to the nearest of `levels` equispaced
/// values in [0, 1] (graded rather than binary FSU states).
struct MovingWindowLevels {
  int radius = 1;
  double theta = 0.5;
  int levels = 5;
};

/// Strictly stationary field built as a translation-invariant functional of
/// iid site noise. Windows of sites further apart than 2m (sup norm) are
/// disjoint, so the field is 2m-dependent and the maximal correlation
/// coefficient between index sets at that distance vanishes.
struct FieldModel {
  int dimension = 1;
  std::variant<IidBernoulli, MovingWindowThreshold, MovingWindowLevels> rule;

  static FieldModel iid(int dimension, double p);
  static FieldModel threshold(int dimension, int radius, double theta,
                              std::int64_t k_min);
  static FieldModel levels(int dimension, int radius, double theta,
                           int levels = 5);
  /// Radius-m window with the strict-majority rule.
  static FieldModel majority(int dimension, int radius, double theta);

  void validate() const;
  int radius() const;
  double noise_probability() const;
  /// Noise sites per window, (2m+1)^d.
  std::int64_t window_size() const;
  /// State of a site whose window holds `hits` noise hits.
  double state_for_hits(std::int64_t hits) const;
  bool binary() const;

  std::string to_json() const;
  static FieldModel from_json(const std::string& text);

  friend bool operator==(const FieldModel& a, const FieldModel& b);
};

/// Realised field over a cube, row-major with the last coordinate fastest.
struct FieldSample {
  LatticeCube cube;
  std::vector<double> values;
  FieldModel model;
  std::uint64_t seed = 0;

  std::int64_t index(const Coord& site) const;
  double at(const Coord& site) const { return values[index(site)]; }
};

/// Default limit on noise plus state cells allocated by one sample.
inline constexpr std::int64_t kDefaultCellCap = std::int64_t{1} << 26;

/// Deterministic in (model, cube, seed). Noise is addressed by absolute site
/// coordinates, so nested cubes with the same seed agree on shared sites.
FieldSample sample_field(const FieldModel& model, const LatticeCube& cube,
                         std::uint64_t seed,
                         std::int64_t cell_cap = kDefaultCellCap);

/// S(U_n) of a fresh sample without keeping the state array.
double sample_sum(const FieldModel& model, const LatticeCube& cube,
                  std::uint64_t seed, std::int64_t cell_cap = kDefaultCellCap);

/// Exact cov(X_0, X_lag). The two windows share an overlap block; the hit
/// counts of the overlap and of each exclusive part are independent
/// binomials, which turns the joint enumeration into a sum over counts.
double covariance_at_lag(const FieldModel& model,
                         std::span<const std::int64_t> lag);

/// Exact E X_0.
double model_mean(const FieldModel& model);

struct Sigma2 {
  double value = 0.0;
  bool degenerate = false;  // |value| below kSigma2Epsilon
};

inline constexpr double kSigma2Epsilon = 1e-12;

/// sigma^2 = sum of cov(X_0, X_j) over all lags; finite since only
/// |j|_inf <= 2m contributes.
Sigma2 model_sigma2(const FieldModel& model);

/// Binomial(trials, p) probabilities for 0..trials.
std::vector<double> binomial_pmf(std::int64_t trials, double p);

}  // namespace cvntcp
