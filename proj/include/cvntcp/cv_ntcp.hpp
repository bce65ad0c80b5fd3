// Copyright 2026 The cvntcp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "cvntcp/dose_response.hpp"

namespace cvntcp {

/// Berry-Esseen constant for Bernoulli sums.
inline constexpr double kBerryEsseen = 0.7975;

/// Weiss/Uspensky expansion is certified only from this standard deviation on.
inline constexpr double kWeissMinSigma = 5.0;

enum class ApproxMethod { Exact, Normal, NormalIntegerThreshold, Weiss };

const char* to_string(ApproxMethod method) noexcept;

/// A probability together with a guaranteed absolute error. An empty
/// error_bound means the method is outside its certified regime.
struct ApproxResult {
  double value = 0.0;
  std::optional<double> error_bound;
  ApproxMethod method = ApproxMethod::Exact;

  bool certified() const { return error_bound.has_value(); }
};

/// Functional reserve: an integer count of killed FSUs or a fraction of n.
struct ReserveCount {
  std::int64_t threshold = 1;
};
struct ReserveFraction {
  double kappa = 0.5;
};

struct OrganSpec {
  std::int64_t n = 1;
  double volume = 1.0;
  std::vector<double> fsu_volumes;  // empty means all V/n
  std::variant<ReserveCount, ReserveFraction> reserve = ReserveCount{};

  static OrganSpec uniform(std::int64_t n, double volume);
  void validate() const;
  double fsu_volume(std::int64_t i) const;
};

struct FractionCurveFeatures {
  double p1 = 1.0;
  double p_star = 1.0;
  double kappa_star = 1.0;
  double c = 0.0;
};

/// P(S_n >= threshold) for S_n ~ Binomial(n, p), 0 <= threshold <= n + 1.
double ntcp_exact(std::int64_t n, double p, std::int64_t threshold);

/// 1 - Phi((x - np)/sqrt(npq)) with the Berry-Esseen certificate.
ApproxResult ntcp_normal(std::int64_t n, double p, double x);

struct IntegerThresholdResult {
  std::int64_t threshold = 0;
  ApproxResult approx;
};

/// Integer threshold floor(x_gamma) and the widened continuity bound.
IntegerThresholdResult ntcp_normal_integer_threshold(std::int64_t n, double p,
                                                     double gamma);

/// P(k <= S_n <= m) by the skewness-corrected normal expansion.
ApproxResult ntcp_weiss(std::int64_t n, double p, std::int64_t k,
                        std::int64_t m);

/// x_gamma = np + sqrt(npq) z_gamma.
double threshold_for_confidence(std::int64_t n, double p, double gamma);

/// kappa(p) = p + c sqrt(p(1-p)).
double kill_fraction(double p, double c);

FractionCurveFeatures fraction_curve_features(double c);

/// Unique root p in (0, kappa] of kill_fraction(p, c) = kappa.
double invert_fraction(double kappa, double c);

/// Dose whose FSU kill probability realises the kill fraction kappa at
/// confidence gamma (>= 1/2) for an organ of n FSUs.
double dose_for_fraction(const DoseResponseModel& model,
                         const CellPopulation& cells, double kappa,
                         std::int64_t n, double gamma, double tolerance);

/// Total volume of the killed FSUs.
double damage_volume(const OrganSpec& organ,
                     std::span<const std::uint8_t> states);

}  // namespace cvntcp
