// Copyright 2026 The cvntcp Authors
// SPDX-License-Identifier: Apache-2.0
#include "cvntcp/cv_ntcp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cvntcp/error.hpp"
#include "cvntcp/normal.hpp"

namespace cvntcp {

const char* to_string(ApproxMethod method) noexcept {
  switch (method) {
    case ApproxMethod::Exact: return "exact";
    case ApproxMethod::Normal: return "normal";
    case ApproxMethod::NormalIntegerThreshold: return "normal-integer";
    case ApproxMethod::Weiss: return "weiss";
  }
  return "unknown";
}

OrganSpec OrganSpec::uniform(std::int64_t n, double volume) {
  OrganSpec organ;
  organ.n = n;
  organ.volume = volume;
  organ.validate();
  return organ;
}

void OrganSpec::validate() const {
  if (n < 1) fail(ErrorKind::Parameter, "organ must have at least one FSU");
  if (!(volume > 0.0) || !std::isfinite(volume))
    fail(ErrorKind::Parameter, "organ volume must be positive");
  if (!fsu_volumes.empty()) {
    if (static_cast<std::int64_t>(fsu_volumes.size()) != n)
      fail(ErrorKind::Shape, "expected one volume per FSU");
    for (double v : fsu_volumes)
      if (!(v > 0.0)) fail(ErrorKind::Parameter, "FSU volumes must be positive");
    const double total =
        std::accumulate(fsu_volumes.begin(), fsu_volumes.end(), 0.0);
    if (std::abs(total - volume) > 1e-9 * volume)
      fail(ErrorKind::Parameter, "FSU volumes must sum to the organ volume");
  }
  if (const auto* count = std::get_if<ReserveCount>(&reserve)) {
    if (count->threshold < 0 || count->threshold > n + 1)
      fail(ErrorKind::Domain, "reserve threshold must lie in [0, n+1]");
  } else {
    const double kappa = std::get<ReserveFraction>(reserve).kappa;
    if (!(kappa > 0.0 && kappa < 1.0))
      fail(ErrorKind::Domain, "reserve fraction must lie in (0, 1)");
  }
}

double OrganSpec::fsu_volume(std::int64_t i) const {
  return fsu_volumes.empty() ? volume / static_cast<double>(n)
                             : fsu_volumes[static_cast<std::size_t>(i)];
}

namespace {

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    fail(ErrorKind::Domain, "probability must lie in [0, 1]");
}

double bernoulli_sigma(std::int64_t n, double p) {
  if (n < 1) fail(ErrorKind::Domain, "n must be positive");
  check_probability(p);
  const double var = static_cast<double>(n) * p * (1.0 - p);
  if (!(var > 0.0))
    fail(ErrorKind::Degenerate, "np(1-p) must be positive");
  return std::sqrt(var);
}

void check_confidence(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0))
    fail(ErrorKind::Domain, "confidence level must lie in (0, 1)");
}

}  // namespace

double ntcp_exact(std::int64_t n, double p, std::int64_t threshold) {
  if (n < 0) fail(ErrorKind::Domain, "n must be nonnegative");
  check_probability(p);
  if (threshold < 0 || threshold > n + 1)
    fail(ErrorKind::Domain, "threshold must lie in [0, n+1]");
  if (threshold == 0) return 1.0;
  if (threshold == n + 1) return 0.0;
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;

  // Terms relative to the mode via the ratio t(k+1)/t(k) = (n-k)p / ((k+1)q),
  // normalised by their total; no factorials or lgamma involved.
  const double odds = p / (1.0 - p);
  const auto mode = std::clamp<std::int64_t>(
      static_cast<std::int64_t>(std::floor(static_cast<double>(n + 1) * p)), 0,
      n);
  double total = 1.0;
  double tail = mode >= threshold ? 1.0 : 0.0;
  double term = 1.0;
  for (std::int64_t k = mode; k < n; ++k) {
    term *= static_cast<double>(n - k) / static_cast<double>(k + 1) * odds;
    if (term == 0.0) break;
    total += term;
    if (k + 1 >= threshold) tail += term;
  }
  term = 1.0;
  for (std::int64_t k = mode; k > 0; --k) {
    term *= static_cast<double>(k) / (static_cast<double>(n - k + 1) * odds);
    if (term == 0.0) break;
    total += term;
    if (k - 1 >= threshold) tail += term;
  }
  return std::clamp(tail / total, 0.0, 1.0);
}

ApproxResult ntcp_normal(std::int64_t n, double p, double x) {
  const double sigma = bernoulli_sigma(n, p);
  const double z = (x - static_cast<double>(n) * p) / sigma;
  return {normal_sf(z), kBerryEsseen / sigma, ApproxMethod::Normal};
}

double threshold_for_confidence(std::int64_t n, double p, double gamma) {
  const double sigma = bernoulli_sigma(n, p);
  check_confidence(gamma);
  return static_cast<double>(n) * p + sigma * normal_quantile(gamma);
}

IntegerThresholdResult ntcp_normal_integer_threshold(std::int64_t n, double p,
                                                     double gamma) {
  const double sigma = bernoulli_sigma(n, p);
  check_confidence(gamma);
  const double z = normal_quantile(gamma);
  const double x = static_cast<double>(n) * p + sigma * z;
  const auto threshold = static_cast<std::int64_t>(
      std::clamp(std::floor(x), 0.0, static_cast<double>(n + 1)));
  return {threshold,
          {normal_sf(z), (kBerryEsseen + kInvSqrt2Pi) / sigma,
           ApproxMethod::NormalIntegerThreshold}};
}

ApproxResult ntcp_weiss(std::int64_t n, double p, std::int64_t k,
                        std::int64_t m) {
  const double sigma = bernoulli_sigma(n, p);
  if (k < 0 || k > m || m > n)
    fail(ErrorKind::Domain, "Weiss range requires 0 <= k <= m <= n");
  const double q = 1.0 - p;
  const double mean = static_cast<double>(n) * p;
  const double t1 = (static_cast<double>(k) - 0.5 - mean) / sigma;
  const double t2 = (static_cast<double>(m) + 0.5 - mean) / sigma;
  const auto g = [](double t) { return (1.0 - t * t) * std::exp(-0.5 * t * t); };
  // Phi(t2) - Phi(t1) from whichever tail keeps precision.
  const double mass = t1 >= 0.0 ? normal_sf(t1) - normal_sf(t2)
                                : normal_cdf(t2) - normal_cdf(t1);
  const double skew = (q - p) * kInvSqrt2Pi / (6.0 * sigma) * (g(t2) - g(t1));
  ApproxResult result{std::clamp(mass + skew, 0.0, 1.0), std::nullopt,
                      ApproxMethod::Weiss};
  if (sigma >= kWeissMinSigma)
    result.error_bound = (0.12 + 0.18 * std::abs(p - q)) / (sigma * sigma) +
                         std::exp(-1.5 * sigma);
  return result;
}

double kill_fraction(double p, double c) {
  check_probability(p);
  if (!(c >= 0.0)) fail(ErrorKind::Domain, "c must be nonnegative");
  return p + c * std::sqrt(p * (1.0 - p));
}

FractionCurveFeatures fraction_curve_features(double c) {
  if (!(c >= 0.0) || !std::isfinite(c))
    fail(ErrorKind::Domain, "c must be nonnegative");
  const double r = std::sqrt(1.0 + c * c);
  return {1.0 / (1.0 + c * c), 0.5 * (1.0 + 1.0 / r), 0.5 * (1.0 + r), c};
}

double invert_fraction(double kappa, double c) {
  if (!(kappa > 0.0 && kappa < 1.0))
    fail(ErrorKind::Domain, "kill fraction must lie in (0, 1)");
  if (!(c >= 0.0) || !std::isfinite(c))
    fail(ErrorKind::Domain, "c must be nonnegative");
  // Squaring kappa - p = c sqrt(p(1-p)) gives two roots with kappa strictly
  // between them. Only the smaller one satisfies kappa - p >= 0. It is taken
  // from the product of roots kappa^2 / (1 + c^2) to avoid cancellation.
  if (c == 0.0) return kappa;
  const double c2 = c * c;
  const double larger =
      (kappa + 0.5 * c2 + c * std::sqrt(kappa - kappa * kappa + 0.25 * c2)) /
      (1.0 + c2);
  return std::min(kappa, kappa * kappa / ((1.0 + c2) * larger));
}

double dose_for_fraction(const DoseResponseModel& model,
                         const CellPopulation& cells, double kappa,
                         std::int64_t n, double gamma, double tolerance) {
  if (n < 1) fail(ErrorKind::Domain, "n must be positive");
  check_confidence(gamma);
  if (gamma < 0.5)
    fail(ErrorKind::Domain, "fraction inversion requires gamma >= 1/2");
  if (!(tolerance > 0.0)) fail(ErrorKind::Domain, "tolerance must be positive");
  const double c = normal_quantile(gamma) / std::sqrt(static_cast<double>(n));
  const double p_bar = invert_fraction(kappa, c);
  // Tighten the probability tolerance by the slope of kappa(p) so that the
  // forward chain also lands within tolerance of kappa.
  const double slope =
      1.0 + c * (1.0 - 2.0 * p_bar) / (2.0 * std::sqrt(p_bar * (1.0 - p_bar)));
  const double p_tol = tolerance / std::max(1.0, std::abs(slope));
  try {
    return dose_for_kill_probability(model, cells, p_bar, p_tol);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Unattainable)
      fail(ErrorKind::Unattainable,
           "kill fraction " + std::to_string(kappa) +
               " is unattainable for this dose model: " + e.what());
    throw;
  }
}

double damage_volume(const OrganSpec& organ,
                     std::span<const std::uint8_t> states) {
  organ.validate();
  if (static_cast<std::int64_t>(states.size()) != organ.n)
    fail(ErrorKind::Shape, "state vector length must equal the FSU count");
  if (organ.fsu_volumes.empty()) {
    std::int64_t killed = 0;
    for (auto s : states) {
      if (s > 1) fail(ErrorKind::Domain, "FSU states must be 0 or 1");
      killed += s;
    }
    return organ.volume * static_cast<double>(killed) /
           static_cast<double>(organ.n);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i] > 1) fail(ErrorKind::Domain, "FSU states must be 0 or 1");
    if (states[i] == 1) total += organ.fsu_volumes[i];
  }
  return total;
}

}  // namespace cvntcp
