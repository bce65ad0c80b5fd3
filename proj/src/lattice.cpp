// Copyright 2026 The cvntcp Authors
// SPDX-License-Identifier: Apache-2.0
#include "cvntcp/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include <json.hpp>

#include "cvntcp/error.hpp"
#include "cvntcp/rng.hpp"

namespace cvntcp {

using nlohmann::json;

void LatticeCube::validate() const {
  if (dimension < 1 || dimension > kMaxDimension)
    fail(ErrorKind::Domain, "lattice dimension must be 1, 2 or 3");
  if (half_width < 0) fail(ErrorKind::Domain, "cube half-width must be >= 0");
}

std::int64_t LatticeCube::size() const {
  std::int64_t total = 1;
  for (int k = 0; k < dimension; ++k) total *= side();
  return total;
}

// ---------------------------------------------------------------------------

FieldModel FieldModel::iid(int dimension, double p) {
  FieldModel m{dimension, IidBernoulli{p}};
  m.validate();
  return m;
}

FieldModel FieldModel::threshold(int dimension, int radius, double theta,
                                 std::int64_t k_min) {
  FieldModel m{dimension, MovingWindowThreshold{radius, theta, k_min}};
  m.validate();
  return m;
}

FieldModel FieldModel::levels(int dimension, int radius, double theta,
                              int levels) {
  FieldModel m{dimension, MovingWindowLevels{radius, theta, levels}};
  m.validate();
  return m;
}

FieldModel FieldModel::majority(int dimension, int radius, double theta) {
  FieldModel m{dimension, MovingWindowThreshold{radius, theta, 0}};
  const std::int64_t w = m.window_size();
  std::get<MovingWindowThreshold>(m.rule).k_min = w / 2 + 1;
  m.validate();
  return m;
}

int FieldModel::radius() const {
  return std::visit(
      [](const auto& r) -> int {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, IidBernoulli>)
          return 0;
        else
          return r.radius;
      },
      rule);
}

double FieldModel::noise_probability() const {
  return std::visit(
      [](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, IidBernoulli>)
          return r.p;
        else
          return r.theta;
      },
      rule);
}

std::int64_t FieldModel::window_size() const {
  std::int64_t w = 1;
  for (int k = 0; k < dimension; ++k) w *= 2 * radius() + 1;
  return w;
}

void FieldModel::validate() const {
  if (dimension < 1 || dimension > kMaxDimension)
    fail(ErrorKind::Parameter, "field dimension must be 1, 2 or 3");
  if (radius() < 0 || radius() > 64)
    fail(ErrorKind::Parameter, "window radius must lie in [0, 64]");
  const double q = noise_probability();
  if (!(q >= 0.0 && q <= 1.0))
    fail(ErrorKind::Parameter, "noise probability must lie in [0, 1]");
  if (const auto* t = std::get_if<MovingWindowThreshold>(&rule)) {
    if (t->k_min < 0 || t->k_min > window_size() + 1)
      fail(ErrorKind::Parameter, "k_min must lie in [0, window size + 1]");
  }
  if (const auto* l = std::get_if<MovingWindowLevels>(&rule)) {
    if (l->levels < 2) fail(ErrorKind::Parameter, "need at least two levels");
  }
}

double FieldModel::state_for_hits(std::int64_t hits) const {
  return std::visit(
      [&](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, IidBernoulli>) {
          return static_cast<double>(hits);
        } else if constexpr (std::is_same_v<T, MovingWindowThreshold>) {
          return hits >= r.k_min ? 1.0 : 0.0;
        } else {
          const double steps = r.levels - 1;
          const double frac =
              static_cast<double>(hits) / static_cast<double>(window_size());
          return std::floor(frac * steps + 0.5) / steps;
        }
      },
      rule);
}

bool FieldModel::binary() const {
  return !std::holds_alternative<MovingWindowLevels>(rule);
}

std::string FieldModel::to_json() const {
  json j;
  j["dimension"] = dimension;
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, IidBernoulli>) {
          j["type"] = "iid_bernoulli";
          j["p"] = r.p;
        } else if constexpr (std::is_same_v<T, MovingWindowThreshold>) {
          j["type"] = "moving_window_threshold";
          j["radius"] = r.radius;
          j["theta"] = r.theta;
          j["k_min"] = r.k_min;
        } else {
          j["type"] = "moving_window_levels";
          j["radius"] = r.radius;
          j["theta"] = r.theta;
          j["levels"] = r.levels;
        }
      },
      rule);
  return j.dump();
}

FieldModel FieldModel::from_json(const std::string& text) {
  FieldModel m;
  try {
    const json j = json::parse(text);
    m.dimension = j.value("dimension", 1);
    const std::string type = j.at("type").get<std::string>();
    if (type == "iid_bernoulli") {
      m.rule = IidBernoulli{j.at("p").get<double>()};
    } else if (type == "moving_window_threshold") {
      m.rule = MovingWindowThreshold{j.at("radius").get<int>(),
                                     j.at("theta").get<double>(),
                                     j.at("k_min").get<std::int64_t>()};
    } else if (type == "majority") {
      m = majority(m.dimension, j.value("radius", 1), j.at("theta").get<double>());
    } else if (type == "moving_window_levels") {
      m.rule = MovingWindowLevels{j.at("radius").get<int>(),
                                  j.at("theta").get<double>(),
                                  j.value("levels", 5)};
    } else {
      fail(ErrorKind::Config, "unknown field model type '" + type + "'");
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::Config, std::string("malformed field model: ") + e.what());
  }
  m.validate();
  return m;
}

bool operator==(const FieldModel& a, const FieldModel& b) {
  return a.to_json() == b.to_json();
}

std::int64_t FieldSample::index(const Coord& site) const {
  std::int64_t idx = 0;
  for (int k = 0; k < cube.dimension; ++k) {
    const std::int64_t off = site[k] + cube.half_width;
    if (off < 0 || off >= cube.side())
      fail(ErrorKind::Shape, "site lies outside the sampled cube");
    idx = idx * cube.side() + off;
  }
  return idx;
}

// ---------------------------------------------------------------------------

namespace {

using Shape = std::array<std::int64_t, kMaxDimension>;

Shape strides_of(const Shape& s) { return {s[1] * s[2], s[2], 1}; }

// Sliding sum of width 2m+1 along `axis`; the output is 2m shorter there.
std::vector<std::int32_t> box_sum(const std::vector<std::int32_t>& in,
                                  const Shape& in_shape, int axis, int m,
                                  Shape& out_shape) {
  out_shape = in_shape;
  out_shape[axis] -= 2 * m;
  const Shape is = strides_of(in_shape);
  const Shape os = strides_of(out_shape);
  int b0 = axis == 0 ? 1 : 0;
  int b1 = axis == 2 ? 1 : 2;
  std::vector<std::int32_t> out(
      static_cast<std::size_t>(out_shape[0] * out_shape[1] * out_shape[2]));
  const std::int64_t width = 2 * m + 1;
  for (std::int64_t u = 0; u < out_shape[b0]; ++u) {
    for (std::int64_t v = 0; v < out_shape[b1]; ++v) {
      const std::int64_t ib = u * is[b0] + v * is[b1];
      const std::int64_t ob = u * os[b0] + v * os[b1];
      std::int32_t run = 0;
      for (std::int64_t t = 0; t < width; ++t) run += in[ib + t * is[axis]];
      out[ob] = run;
      for (std::int64_t t = 1; t < out_shape[axis]; ++t) {
        run += in[ib + (t + width - 1) * is[axis]] - in[ib + (t - 1) * is[axis]];
        out[ob + t * os[axis]] = run;
      }
    }
  }
  return out;
}

// Window hit counts for every site of the cube.
std::vector<std::int32_t> window_hits(const FieldModel& model,
                                      const LatticeCube& cube,
                                      std::uint64_t seed,
                                      std::int64_t cell_cap) {
  model.validate();
  cube.validate();
  if (model.dimension != cube.dimension)
    fail(ErrorKind::Shape, "model and cube dimensions differ");
  const int d = cube.dimension;
  const int m = model.radius();
  const std::int64_t reach = cube.half_width + m;
  const std::int64_t ext = 2 * reach + 1;
  const double cells = std::pow(static_cast<double>(ext), d) +
                       static_cast<double>(cube.size());
  if (cells > static_cast<double>(cell_cap))
    fail(ErrorKind::Capacity, "sample needs " + std::to_string(cells) +
                                  " cells, above the cap of " +
                                  std::to_string(cell_cap));

  Shape shape{1, 1, 1};
  for (int k = 0; k < d; ++k) shape[k] = ext;
  std::vector<std::int32_t> hits(
      static_cast<std::size_t>(shape[0] * shape[1] * shape[2]));
  const double theta = model.noise_probability();
  std::size_t idx = 0;
  for (std::int64_t i0 = 0; i0 < shape[0]; ++i0) {
    const std::int64_t x = i0 - reach;
    for (std::int64_t i1 = 0; i1 < shape[1]; ++i1) {
      const std::int64_t y = d > 1 ? i1 - reach : 0;
      for (std::int64_t i2 = 0; i2 < shape[2]; ++i2) {
        const std::int64_t z = d > 2 ? i2 - reach : 0;
        hits[idx++] = site_uniform(seed, x, y, z) < theta ? 1 : 0;
      }
    }
  }
  for (int axis = 0; axis < d && m > 0; ++axis) {
    Shape next;
    hits = box_sum(hits, shape, axis, m, next);
    shape = next;
  }
  return hits;
}

std::vector<double> state_table(const FieldModel& model) {
  std::vector<double> table(static_cast<std::size_t>(model.window_size() + 1));
  for (std::size_t h = 0; h < table.size(); ++h)
    table[h] = model.state_for_hits(static_cast<std::int64_t>(h));
  return table;
}

}  // namespace

FieldSample sample_field(const FieldModel& model, const LatticeCube& cube,
                         std::uint64_t seed, std::int64_t cell_cap) {
  const auto hits = window_hits(model, cube, seed, cell_cap);
  const auto table = state_table(model);
  FieldSample sample{cube, std::vector<double>(hits.size()), model, seed};
  for (std::size_t i = 0; i < hits.size(); ++i)
    sample.values[i] = table[static_cast<std::size_t>(hits[i])];
  return sample;
}

double sample_sum(const FieldModel& model, const LatticeCube& cube,
                  std::uint64_t seed, std::int64_t cell_cap) {
  const auto hits = window_hits(model, cube, seed, cell_cap);
  const auto table = state_table(model);
  double total = 0.0;
  for (auto h : hits) total += table[static_cast<std::size_t>(h)];
  return total;
}

// ---------------------------------------------------------------------------

std::vector<double> binomial_pmf(std::int64_t trials, double p) {
  if (trials < 0) fail(ErrorKind::Domain, "trials must be nonnegative");
  std::vector<double> pmf(static_cast<std::size_t>(trials + 1), 0.0);
  if (p <= 0.0) {
    pmf.front() = 1.0;
    return pmf;
  }
  if (p >= 1.0) {
    pmf.back() = 1.0;
    return pmf;
  }
  const double odds = p / (1.0 - p);
  const auto mode = std::clamp<std::int64_t>(
      static_cast<std::int64_t>(std::floor(static_cast<double>(trials + 1) * p)),
      0, trials);
  pmf[mode] = 1.0;
  for (std::int64_t k = mode; k < trials; ++k)
    pmf[k + 1] = pmf[k] * static_cast<double>(trials - k) /
                 static_cast<double>(k + 1) * odds;
  for (std::int64_t k = mode; k > 0; --k)
    pmf[k - 1] =
        pmf[k] * static_cast<double>(k) /
        (static_cast<double>(trials - k + 1) * odds);
  double total = 0.0;
  for (double v : pmf) total += v;
  for (double& v : pmf) v /= total;
  return pmf;
}

double model_mean(const FieldModel& model) {
  model.validate();
  const auto pmf = binomial_pmf(model.window_size(), model.noise_probability());
  double mean = 0.0;
  for (std::size_t h = 0; h < pmf.size(); ++h)
    mean += pmf[h] * model.state_for_hits(static_cast<std::int64_t>(h));
  return mean;
}

double covariance_at_lag(const FieldModel& model,
                         std::span<const std::int64_t> lag) {
  model.validate();
  if (static_cast<int>(lag.size()) != model.dimension)
    fail(ErrorKind::Shape, "lag must have one component per dimension");
  const std::int64_t width = 2 * model.radius() + 1;
  std::int64_t overlap = 1;
  for (auto l : lag) {
    const std::int64_t shared = width - std::abs(l);
    if (shared <= 0) return 0.0;  // disjoint windows: independent states
    overlap *= shared;
  }
  const std::int64_t window = model.window_size();
  const double theta = model.noise_probability();
  const auto shared_pmf = binomial_pmf(overlap, theta);
  const auto own_pmf = binomial_pmf(window - overlap, theta);
  const auto table = state_table(model);

  double joint = 0.0;
  for (std::size_t c = 0; c < shared_pmf.size(); ++c) {
    double conditional = 0.0;  // E[f(A + c)] for one exclusive part A
    for (std::size_t a = 0; a < own_pmf.size(); ++a)
      conditional += own_pmf[a] * table[a + c];
    joint += shared_pmf[c] * conditional * conditional;
  }
  const double mean = model_mean(model);
  return joint - mean * mean;
}

Sigma2 model_sigma2(const FieldModel& model) {
  model.validate();
  const int d = model.dimension;
  const std::int64_t reach = 2 * model.radius();
  std::array<std::int64_t, kMaxDimension> lag{};
  double total = 0.0;
  const std::int64_t span = 2 * reach + 1;
  std::int64_t count = 1;
  for (int k = 0; k < d; ++k) count *= span;
  for (std::int64_t i = 0; i < count; ++i) {
    std::int64_t rest = i;
    for (int k = d - 1; k >= 0; --k) {
      lag[k] = rest % span - reach;
      rest /= span;
    }
    total += covariance_at_lag(model, std::span<const std::int64_t>(lag.data(), d));
  }
  return {total, std::abs(total) < kSigma2Epsilon};
}

}  // namespace cvntcp
