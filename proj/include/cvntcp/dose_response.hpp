// Copyright 2026 The cvntcp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace cvntcp {

enum class DoseModelKind { SingleHit, MultiTarget, Hybrid, LinearQuadratic };

const char* to_string(DoseModelKind kind) noexcept;

/// Parametric surviving-fraction curve SF(D) for a single cell.
///
/// `beta` is read by Hybrid and LinearQuadratic only, `targets` by
/// MultiTarget and Hybrid only. beta = 0 and targets = 1 are accepted and
/// reduce the richer variants to the single-hit curve.
struct DoseResponseModel {
  DoseModelKind kind = DoseModelKind::SingleHit;
  double alpha = 1.0;
  double beta = 0.0;
  int targets = 1;

  static DoseResponseModel single_hit(double alpha);
  static DoseResponseModel multi_target(double alpha, int targets);
  static DoseResponseModel hybrid(double alpha, double beta, int targets);
  static DoseResponseModel linear_quadratic(double alpha, double beta);

  /// Throws ErrorKind::Parameter if the parameters are out of range.
  void validate() const;

  /// Mean lethal dose 1/alpha.
  double mean_lethal_dose() const { return 1.0 / alpha; }
};

/// Number of cells per functional subunit.
struct CellPopulation {
  std::int64_t cells = 1;
  void validate() const;
};

double surviving_fraction(const DoseResponseModel& model, double dose);

/// 1 - SF(D), evaluated without cancellation for small doses.
double cell_kill_probability(const DoseResponseModel& model, double dose);

/// p(D) = (1 - SF(D))^n0: an FSU dies only when none of its cells survive.
double fsu_kill_probability(const DoseResponseModel& model,
                            const CellPopulation& cells, double dose);

/// Upper end of the doubling bracket used by the dose inversions.
inline constexpr double kMaxDose = 1152921504606846976.0;  // 2^60

/// Smallest-residual dose D with |p(D) - target| <= tolerance, by bisection.
double dose_for_kill_probability(const DoseResponseModel& model,
                                 const CellPopulation& cells, double target,
                                 double tolerance);

}  // namespace cvntcp
