// Copyright 2026 The cvntcp Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace cvntcp {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

/// Standard normal c.d.f. via the complementary error function, which keeps
/// full relative accuracy in both tails.
double normal_cdf(double x) noexcept;

/// Upper tail 1 - Phi(x), accurate for large positive x.
double normal_sf(double x) noexcept;

double normal_pdf(double x) noexcept;

/// Inverse of normal_cdf on (0, 1). Throws ErrorKind::Domain outside.
double normal_quantile(double probability);

}  // namespace cvntcp
