// Copyright 2026 The cvntcp Authors
// SPDX-License-Identifier: Apache-2.0
#include "cvntcp/dose_response.hpp"

#include <cmath>
#include <string>

#include "cvntcp/error.hpp"

namespace cvntcp {

const char* to_string(DoseModelKind kind) noexcept {
  switch (kind) {
    case DoseModelKind::SingleHit: return "single-hit";
    case DoseModelKind::MultiTarget: return "multi-target";
    case DoseModelKind::Hybrid: return "hybrid";
    case DoseModelKind::LinearQuadratic: return "linear-quadratic";
  }
  return "unknown";
}

DoseResponseModel DoseResponseModel::single_hit(double alpha) {
  DoseResponseModel m{DoseModelKind::SingleHit, alpha, 0.0, 1};
  m.validate();
  return m;
}

DoseResponseModel DoseResponseModel::multi_target(double alpha, int targets) {
  DoseResponseModel m{DoseModelKind::MultiTarget, alpha, 0.0, targets};
  m.validate();
  return m;
}

DoseResponseModel DoseResponseModel::hybrid(double alpha, double beta,
                                            int targets) {
  DoseResponseModel m{DoseModelKind::Hybrid, alpha, beta, targets};
  m.validate();
  return m;
}

DoseResponseModel DoseResponseModel::linear_quadratic(double alpha,
                                                      double beta) {
  DoseResponseModel m{DoseModelKind::LinearQuadratic, alpha, beta, 1};
  m.validate();
  return m;
}

void DoseResponseModel::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    fail(ErrorKind::Parameter, "alpha must be positive and finite");
  const bool uses_beta =
      kind == DoseModelKind::Hybrid || kind == DoseModelKind::LinearQuadratic;
  const bool uses_targets =
      kind == DoseModelKind::MultiTarget || kind == DoseModelKind::Hybrid;
  if (uses_beta && (!(beta >= 0.0) || !std::isfinite(beta)))
    fail(ErrorKind::Parameter, "beta must be nonnegative and finite");
  if (uses_targets && targets < 1)
    fail(ErrorKind::Parameter, "target count must be at least 1");
}

void CellPopulation::validate() const {
  if (cells < 1) fail(ErrorKind::Parameter, "cells per FSU must be >= 1");
}

namespace {

void check_dose(double dose) {
  if (!(dose >= 0.0)) fail(ErrorKind::Domain, "dose must be nonnegative");
}

// 1 - exp(-x) without cancellation near zero.
double one_minus_exp_neg(double x) { return -std::expm1(-x); }

}  // namespace

double cell_kill_probability(const DoseResponseModel& model, double dose) {
  model.validate();
  check_dose(dose);
  const double a = model.alpha * dose;
  switch (model.kind) {
    case DoseModelKind::SingleHit:
      return one_minus_exp_neg(a);
    case DoseModelKind::MultiTarget:
      return std::pow(one_minus_exp_neg(a), model.targets);
    case DoseModelKind::Hybrid: {
      // 1 - e^{-aD}(1 - h^m) = (1 - e^{-aD}) + e^{-aD} h^m, both terms >= 0
      const double h = one_minus_exp_neg(model.beta * dose);
      return one_minus_exp_neg(a) + std::exp(-a) * std::pow(h, model.targets);
    }
    case DoseModelKind::LinearQuadratic:
      return one_minus_exp_neg(a + model.beta * dose * dose);
  }
  return 0.0;
}

double surviving_fraction(const DoseResponseModel& model, double dose) {
  model.validate();
  check_dose(dose);
  const double a = model.alpha * dose;
  switch (model.kind) {
    case DoseModelKind::SingleHit:
      return std::exp(-a);
    case DoseModelKind::MultiTarget:
      return 1.0 - std::pow(one_minus_exp_neg(a), model.targets);
    case DoseModelKind::Hybrid:
      return std::exp(-a) *
             (1.0 - std::pow(one_minus_exp_neg(model.beta * dose),
                             model.targets));
    case DoseModelKind::LinearQuadratic:
      return std::exp(-(a + model.beta * dose * dose));
  }
  return 1.0;
}

double fsu_kill_probability(const DoseResponseModel& model,
                            const CellPopulation& cells, double dose) {
  cells.validate();
  const double h = cell_kill_probability(model, dose);
  if (h <= 0.0) return 0.0;
  return std::exp(static_cast<double>(cells.cells) * std::log(h));
}

double dose_for_kill_probability(const DoseResponseModel& model,
                                 const CellPopulation& cells, double target,
                                 double tolerance) {
  model.validate();
  cells.validate();
  if (!(target > 0.0 && target < 1.0))
    fail(ErrorKind::Domain, "target kill probability must lie in (0, 1)");
  if (!(tolerance > 0.0))
    fail(ErrorKind::Domain, "tolerance must be positive");

  double hi = 1.0;
  while (fsu_kill_probability(model, cells, hi) <= target) {
    hi *= 2.0;
    if (hi > kMaxDose)
      fail(ErrorKind::Unattainable,
           "kill probability " + std::to_string(target) +
               " not reached below the maximum dose 2^60");
  }
  double lo = 0.0;
  double best = hi;
  double best_err = std::abs(fsu_kill_probability(model, cells, hi) - target);
  for (int iter = 0; iter < 2000 && best_err > tolerance; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double pm = fsu_kill_probability(model, cells, mid);
    const double err = std::abs(pm - target);
    if (err < best_err) {
      best = mid;
      best_err = err;
    }
    if (pm < target)
      lo = mid;
    else
      hi = mid;
  }
  if (best_err > tolerance)
    fail(ErrorKind::Unattainable,
         "bisection interval collapsed before reaching the tolerance");
  return best;
}

}  // namespace cvntcp
