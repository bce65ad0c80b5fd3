// Copyright 2026 The cvntcp Authors
// SPDX-License-Identifier: Apache-2.0
#include "cvntcp/dependent_clt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cvntcp/error.hpp"
#include "cvntcp/normal.hpp"
#include "cvntcp/rng.hpp"
#include "parallel.hpp"

namespace cvntcp {

EstimatorConfig EstimatorConfig::fixed(std::int64_t b) {
  EstimatorConfig c;
  c.bandwidth = b;
  c.validate();
  return c;
}

EstimatorConfig EstimatorConfig::schedule(double eta) {
  EstimatorConfig c;
  c.eta = eta;
  c.validate();
  return c;
}

void EstimatorConfig::validate() const {
  if (bandwidth && *bandwidth < 1)
    fail(ErrorKind::Parameter, "bandwidth must be >= 1");
  if (!bandwidth && !(eta > 0.0 && eta < 1.0))
    fail(ErrorKind::Parameter, "bandwidth exponent must lie in (0, 1)");
}

std::int64_t EstimatorConfig::resolve(std::int64_t n) const {
  validate();
  if (bandwidth) return *bandwidth;
  if (eta == 1.0 / 3.0) return default_bandwidth(n);
  return scheduled_bandwidth(n, eta);
}

namespace {

std::int64_t clamp_bandwidth(std::int64_t b, std::int64_t n) {
  return std::clamp<std::int64_t>(b, 1, std::max<std::int64_t>(1, n - 1));
}

}  // namespace

std::int64_t default_bandwidth(std::int64_t n) {
  if (n < 1) fail(ErrorKind::Domain, "n must be positive");
  std::int64_t b = 1;
  while (b * b * b < n) ++b;
  return clamp_bandwidth(b, n);
}

std::int64_t scheduled_bandwidth(std::int64_t n, double eta) {
  if (n < 1) fail(ErrorKind::Domain, "n must be positive");
  if (!(eta > 0.0 && eta < 1.0))
    fail(ErrorKind::Domain, "bandwidth exponent must lie in (0, 1)");
  const double r = std::pow(static_cast<double>(n), eta);
  const double nearest = std::round(r);
  const double b =
      std::abs(r - nearest) <= 1e-9 * std::max(1.0, r) ? nearest : std::ceil(r);
  return clamp_bandwidth(static_cast<std::int64_t>(b), n);
}

namespace {

// Summed-area table over the cube, padded by one leading zero per axis.
// Unused axes have extent 1. Values are stored relative to the first site so
// that constant fields give exactly zero deviations.
class BlockSums {
 public:
  explicit BlockSums(const FieldSample& sample) : d_(sample.cube.dimension) {
    if (sample.values.empty() ||
        static_cast<std::int64_t>(sample.values.size()) != sample.cube.size())
      fail(ErrorKind::Shape, "sample is empty or does not match its cube");
    for (int k = 0; k < kMaxDimension; ++k)
      extent_[k] = k < d_ ? sample.cube.side() : 1;
    stride_ = {(extent_[1] + 1) * (extent_[2] + 1), extent_[2] + 1, 1};
    table_.assign(static_cast<std::size_t>((extent_[0] + 1) * stride_[0]), 0.0);
    offset_ = sample.values.front();
    std::size_t src = 0;
    for (std::int64_t i = 1; i <= extent_[0]; ++i)
      for (std::int64_t j = 1; j <= extent_[1]; ++j)
        for (std::int64_t k = 1; k <= extent_[2]; ++k) {
          double v = sample.values[src++] - offset_;
          v += at(i - 1, j, k) + at(i, j - 1, k) + at(i, j, k - 1);
          v -= at(i - 1, j - 1, k) + at(i - 1, j, k - 1) + at(i, j - 1, k - 1);
          v += at(i - 1, j - 1, k - 1);
          table_[idx(i, j, k)] = v;
        }
  }

  // Sum over offsets [lo, hi] (0-based, inclusive) per axis.
  double sum(const Coord& lo, const Coord& hi) const {
    const double count = static_cast<double>(
        (hi[0] - lo[0] + 1) * (hi[1] - lo[1] + 1) * (hi[2] - lo[2] + 1));
    return shifted_sum(lo, hi) + count * offset_;
  }

  // As sum() but for values minus the reference value.
  double shifted_sum(const Coord& lo, const Coord& hi) const {
    double total = 0.0;
    for (int corner = 0; corner < 8; ++corner) {
      std::int64_t c[3];
      int sign = 1;
      for (int k = 0; k < 3; ++k) {
        if (corner & (1 << k)) {
          c[k] = lo[k];
          sign = -sign;
        } else {
          c[k] = hi[k] + 1;
        }
      }
      if (c[0] == 0 || c[1] == 0 || c[2] == 0) continue;
      total += sign * at(c[0], c[1], c[2]);
    }
    return total;
  }

  double shifted_total() const { return at(extent_[0], extent_[1], extent_[2]); }
  double total() const {
    return shifted_total() +
           static_cast<double>(extent_[0] * extent_[1] * extent_[2]) * offset_;
  }
  std::int64_t extent(int k) const { return extent_[k]; }

 private:
  std::size_t idx(std::int64_t i, std::int64_t j, std::int64_t k) const {
    return static_cast<std::size_t>(i * stride_[0] + j * stride_[1] + k);
  }
  double at(std::int64_t i, std::int64_t j, std::int64_t k) const {
    return table_[idx(i, j, k)];
  }

  int d_;
  double offset_ = 0.0;
  Coord extent_{};
  Coord stride_{};
  std::vector<double> table_;
};

double estimator_from_sums(const BlockSums& sums, std::int64_t b) {
  const std::int64_t cube_size = sums.extent(0) * sums.extent(1) * sums.extent(2);
  const double global_mean =
      sums.shifted_total() / static_cast<double>(cube_size);
  double acc = 0.0;
  Coord lo{}, hi{};
  for (std::int64_t i = 0; i < sums.extent(0); ++i) {
    lo[0] = std::max<std::int64_t>(0, i - b);
    hi[0] = std::min(sums.extent(0) - 1, i + b);
    for (std::int64_t j = 0; j < sums.extent(1); ++j) {
      lo[1] = std::max<std::int64_t>(0, j - b);
      hi[1] = std::min(sums.extent(1) - 1, j + b);
      for (std::int64_t k = 0; k < sums.extent(2); ++k) {
        lo[2] = std::max<std::int64_t>(0, k - b);
        hi[2] = std::min(sums.extent(2) - 1, k + b);
        const auto block = static_cast<double>((hi[0] - lo[0] + 1) *
                                               (hi[1] - lo[1] + 1) *
                                               (hi[2] - lo[2] + 1));
        const double dev = sums.shifted_sum(lo, hi) / block - global_mean;
        acc += block * dev * dev;
      }
    }
  }
  return acc / static_cast<double>(cube_size);
}

}  // namespace

double partial_sum(const FieldSample& sample) {
  if (sample.values.empty()) fail(ErrorKind::Shape, "empty sample");
  double total = 0.0;
  for (double v : sample.values) total += v;
  return total;
}

double partial_sum(const FieldSample& sample, const Box& region) {
  const auto& cube = sample.cube;
  Coord lo{}, hi{};
  for (int k = 0; k < cube.dimension; ++k) {
    if (region.lo[k] > region.hi[k] || region.lo[k] < -cube.half_width ||
        region.hi[k] > cube.half_width)
      fail(ErrorKind::Shape, "region is empty or leaves the cube");
    lo[k] = region.lo[k] + cube.half_width;
    hi[k] = region.hi[k] + cube.half_width;
  }
  return BlockSums(sample).sum(lo, hi);
}

double variance_estimator(const FieldSample& sample, std::int64_t bandwidth) {
  if (bandwidth < 1) fail(ErrorKind::Parameter, "bandwidth must be >= 1");
  return estimator_from_sums(BlockSums(sample), bandwidth);
}

double variance_estimator(const FieldSample& sample,
                          const EstimatorConfig& config) {
  return variance_estimator(sample, config.resolve(sample.cube.half_width));
}

NormalizedStatistic self_normalized_statistic(const FieldSample& sample,
                                              double mean,
                                              const EstimatorConfig& config,
                                              const Normalization& mode) {
  NormalizedStatistic stat;
  stat.cube_size = sample.cube.size();
  stat.mean = mean;
  if (const auto* ts = std::get_if<TrueSigma>(&mode)) {
    stat.sum = partial_sum(sample);
    stat.variance = ts->sigma2;
  } else {
    const BlockSums sums(sample);
    stat.estimated = true;
    stat.sum = sums.total();
    stat.variance =
        estimator_from_sums(sums, config.resolve(sample.cube.half_width));
  }
  if (!(stat.variance > 0.0))
    fail(ErrorKind::Degenerate, "normalising variance is zero");
  const auto size = static_cast<double>(stat.cube_size);
  stat.value = (stat.sum - size * mean) / std::sqrt(stat.variance * size);
  return stat;
}

Interval confidence_interval(const FieldSample& sample, double level,
                             const EstimatorConfig& config) {
  if (!(level > 0.0 && level < 1.0))
    fail(ErrorKind::Domain, "confidence level must lie in (0, 1)");
  const BlockSums sums(sample);
  const double chat =
      estimator_from_sums(sums, config.resolve(sample.cube.half_width));
  if (!(chat > 0.0))
    fail(ErrorKind::Degenerate, "variance estimate is zero; interval undefined");
  const auto size = static_cast<double>(sample.cube.size());
  const double centre = sums.total() / size;
  const double half = normal_quantile(0.5 * (1.0 + level)) * std::sqrt(chat / size);
  return {centre - half, centre + half};
}

double ntcp_estimate(const FieldSample& sample, double x, double mean,
                     const EstimatorConfig& config) {
  const BlockSums sums(sample);
  const double chat =
      estimator_from_sums(sums, config.resolve(sample.cube.half_width));
  if (!(chat > 0.0))
    fail(ErrorKind::Degenerate, "variance estimate is zero; estimate undefined");
  const auto size = static_cast<double>(sample.cube.size());
  return normal_sf((x - size * mean) / std::sqrt(chat * size));
}

double gap_envelope(double n, int dimension, double lambda) {
  const double d = dimension;
  if (!(lambda > d)) fail(ErrorKind::Domain, "envelope needs lambda > d");
  if (lambda < d + 1.0) return std::pow(n, d - lambda);
  if (lambda == d + 1.0) return (1.0 + std::log(n)) / n;
  return 1.0 / n;
}

std::vector<VarianceGapRow> variance_gap(const FieldModel& model,
                                         std::span<const std::int64_t> schedule,
                                         std::int64_t replicates,
                                         std::uint64_t seed, unsigned threads) {
  if (replicates < 2) fail(ErrorKind::Domain, "need at least two replicates");
  const Sigma2 sigma2 = model_sigma2(model);
  if (sigma2.degenerate)
    fail(ErrorKind::Degenerate, "model variance sigma^2 is zero");

  std::vector<VarianceGapRow> rows;
  std::vector<double> sums(static_cast<std::size_t>(replicates));
  for (const std::int64_t n : schedule) {
    const LatticeCube cube{model.dimension, n};
    cube.validate();
    detail::parallel_for(replicates, threads, [&](std::int64_t r) {
      sums[static_cast<std::size_t>(r)] = sample_sum(
          model, cube, replicate_seed(seed, static_cast<std::uint64_t>(n),
                                      static_cast<std::uint64_t>(r)));
    });
    double mean = 0.0;
    for (double s : sums) mean += s;
    mean /= static_cast<double>(replicates);
    double ss = 0.0;
    for (double s : sums) ss += (s - mean) * (s - mean);
    const double var = ss / static_cast<double>(replicates - 1);

    VarianceGapRow row;
    row.n = n;
    row.cube_size = cube.size();
    row.variance_ratio = var / static_cast<double>(row.cube_size);
    row.sigma2 = sigma2.value;
    row.gap = std::abs(row.variance_ratio - sigma2.value);
    row.envelope = gap_envelope(static_cast<double>(std::max<std::int64_t>(n, 1)),
                                model.dimension);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace cvntcp
