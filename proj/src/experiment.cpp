// Copyright 2026 The cvntcp Authors
// SPDX-License-Identifier: Apache-2.0
#include "cvntcp/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "cvntcp/error.hpp"
#include "cvntcp/normal.hpp"
#include "cvntcp/rng.hpp"
#include "parallel.hpp"

namespace cvntcp {

using nlohmann::json;

const char* to_string(StatisticMode mode) noexcept {
  return mode == StatisticMode::TrueSigma ? "true_sigma" : "estimated";
}

// ---------------------------------------------------------------------------
// Configuration

void ExperimentConfig::validate() const {
  model.validate();
  bandwidth.validate();
  if (n_schedule.empty()) fail(ErrorKind::Config, "n_schedule is empty");
  for (std::size_t i = 0; i < n_schedule.size(); ++i) {
    if (n_schedule[i] < 1) fail(ErrorKind::Config, "half-widths must be >= 1");
    if (i > 0 && n_schedule[i] <= n_schedule[i - 1])
      fail(ErrorKind::Config, "n_schedule must be strictly increasing");
  }
  if (replicates < 2) fail(ErrorKind::Config, "replicates must be >= 2");
  for (double level : levels)
    if (!(level > 0.0 && level < 1.0))
      fail(ErrorKind::Config, "confidence levels must lie in (0, 1)");
}

std::string ExperimentConfig::to_json() const {
  json j;
  j["model"] = json::parse(model.to_json());
  j["n_schedule"] = n_schedule;
  j["replicates"] = replicates;
  j["master_seed"] = master_seed;
  if (bandwidth.bandwidth)
    j["bandwidth"] = {{"fixed", *bandwidth.bandwidth}};
  else
    j["bandwidth"] = {{"eta", bandwidth.eta}};
  if (hypothesized_mean)
    j["mean"] = {{"hypothesized", *hypothesized_mean}};
  else
    j["mean"] = "model";
  j["levels"] = levels;
  return j.dump();
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  ExperimentConfig c;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) fail(ErrorKind::Config, "config must be a JSON object");
    c.model = FieldModel::from_json(j.at("model").dump());
    c.n_schedule = j.at("n_schedule").get<std::vector<std::int64_t>>();
    c.replicates = j.at("replicates").get<std::int64_t>();
    c.master_seed = j.value("master_seed", std::uint64_t{0});
    if (j.contains("bandwidth")) {
      const json& b = j.at("bandwidth");
      if (b.contains("fixed"))
        c.bandwidth = EstimatorConfig::fixed(b.at("fixed").get<std::int64_t>());
      else
        c.bandwidth = EstimatorConfig::schedule(b.at("eta").get<double>());
    }
    if (j.contains("mean")) {
      const json& m = j.at("mean");
      if (m.is_object())
        c.hypothesized_mean = m.at("hypothesized").get<double>();
      else if (m.get<std::string>() != "model")
        fail(ErrorKind::Config, "mean must be \"model\" or {\"hypothesized\": x}");
    }
    c.levels = j.value("levels", std::vector<double>{});
    c.threads = j.value("threads", 0u);
  } catch (const json::exception& e) {
    fail(ErrorKind::Config, std::string("malformed experiment config: ") + e.what());
  } catch (const Error& e) {
    fail(ErrorKind::Config, e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

// ---------------------------------------------------------------------------
// Instruments

double ks_distance(std::span<const double> values) {
  if (values.empty()) fail(ErrorKind::Shape, "KS distance of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto count = static_cast<double>(sorted.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double phi = normal_cdf(sorted[i]);
    worst = std::max({worst, static_cast<double>(i + 1) / count - phi,
                      phi - static_cast<double>(i) / count});
  }
  return std::clamp(worst, 0.0, 1.0);
}

RateFit fit_rate(std::span<const RatePoint> points, int dimension) {
  if (points.size() < 2) fail(ErrorKind::Domain, "rate fit needs two points");
  if (dimension < 1) fail(ErrorKind::Domain, "dimension must be positive");
  RateFit fit;
  std::vector<double> xs, ys;
  for (const auto& pt : points) {
    if (pt.n < 0) fail(ErrorKind::Domain, "half-width must be nonnegative");
    double ks = pt.ks;
    if (!(ks > 0.0)) {
      ks = std::numeric_limits<double>::epsilon();
      fit.clamped = true;
    }
    xs.push_back(dimension * std::log(2.0 * static_cast<double>(pt.n) + 1.0));
    ys.push_back(std::log(ks));
  }
  const auto k = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) fail(ErrorKind::Domain, "rate fit needs distinct n");
  fit.exponent = -sxy / sxx;
  return fit;
}

// ---------------------------------------------------------------------------
// Replicate engine

namespace {

struct Replicates {
  std::int64_t n = 0;
  std::int64_t cube_size = 0;
  std::int64_t bandwidth = 0;
  std::vector<double> sums;
  std::vector<double> chats;
};

struct Truth {
  double mean = 0.0;
  double sigma2 = 0.0;
};

Truth model_truth(const ExperimentConfig& config) {
  config.validate();
  const Sigma2 s2 = model_sigma2(config.model);
  if (s2.degenerate)
    fail(ErrorKind::Degenerate,
         "model variance sigma^2 is zero (" + config.model.to_json() +
             "); campaign aborted");
  return {model_mean(config.model), s2.value};
}

Replicates simulate(const ExperimentConfig& config, std::int64_t n) {
  Replicates reps;
  const LatticeCube cube{config.model.dimension, n};
  reps.n = n;
  reps.cube_size = cube.size();
  reps.bandwidth = config.bandwidth.resolve(n);
  reps.sums.resize(static_cast<std::size_t>(config.replicates));
  reps.chats.resize(static_cast<std::size_t>(config.replicates));
  detail::parallel_for(config.replicates, config.threads, [&](std::int64_t r) {
    const auto seed = replicate_seed(config.master_seed,
                                     static_cast<std::uint64_t>(n),
                                     static_cast<std::uint64_t>(r));
    const FieldSample sample = sample_field(config.model, cube, seed);
    reps.sums[static_cast<std::size_t>(r)] = partial_sum(sample);
    reps.chats[static_cast<std::size_t>(r)] =
        variance_estimator(sample, reps.bandwidth);
  });
  return reps;
}

void require_positive_chats(const Replicates& reps) {
  for (std::size_t r = 0; r < reps.chats.size(); ++r)
    if (!(reps.chats[r] > 0.0))
      fail(ErrorKind::Degenerate,
           "variance estimate is zero at n=" + std::to_string(reps.n) +
               ", replicate " + std::to_string(r) + "; campaign aborted");
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double median_of(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower =
      *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double coverage_of(const Replicates& reps, double truth, double level,
                   const double* fixed_variance) {
  const double z = normal_quantile(0.5 * (1.0 + level));
  const auto size = static_cast<double>(reps.cube_size);
  std::int64_t hits = 0;
  for (std::size_t r = 0; r < reps.sums.size(); ++r) {
    const double var = fixed_variance ? *fixed_variance : reps.chats[r];
    const double half = z * std::sqrt(var / size);
    const double centre = reps.sums[r] / size;
    if (centre - half <= truth && truth <= centre + half) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(reps.sums.size());
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

ExperimentReport run_clt_experiment(const ExperimentConfig& config) {
  const Truth truth = model_truth(config);
  ExperimentReport report;
  report.config = config;
  report.model_mean = truth.mean;
  report.sigma2 = truth.sigma2;
  report.mean_used = config.hypothesized_mean.value_or(truth.mean);

  std::vector<RatePoint> ts_points, est_points;
  for (const std::int64_t n : config.n_schedule) {
    const Replicates reps = simulate(config, n);
    require_positive_chats(reps);
    const auto size = static_cast<double>(reps.cube_size);
    std::vector<double> ts(reps.sums.size()), est(reps.sums.size());
    for (std::size_t r = 0; r < reps.sums.size(); ++r) {
      const double centred = reps.sums[r] - size * report.mean_used;
      ts[r] = centred / std::sqrt(truth.sigma2 * size);
      est[r] = centred / std::sqrt(reps.chats[r] * size);
    }
    const double chat_mean = mean_of(reps.chats);
    const double chat_sd = sd_of(reps.chats);
    for (const auto mode : {StatisticMode::TrueSigma, StatisticMode::Estimated}) {
      const bool estimated = mode == StatisticMode::Estimated;
      const double ks = ks_distance(estimated ? est : ts);
      (estimated ? est_points : ts_points).push_back({n, ks});
      ReportRow base{n, reps.cube_size, mode, ks, chat_mean, chat_sd,
                     truth.sigma2, std::nullopt, std::nullopt};
      if (config.levels.empty()) {
        report.rows.push_back(base);
        continue;
      }
      for (double level : config.levels) {
        ReportRow row = base;
        row.level = level;
        if (!config.hypothesized_mean)
          row.coverage = coverage_of(reps, truth.mean, level,
                                     estimated ? nullptr : &truth.sigma2);
        report.rows.push_back(row);
      }
    }
  }
  if (config.n_schedule.size() >= 2) {
    report.true_sigma_rate = fit_rate(ts_points, config.model.dimension);
    report.estimated_rate = fit_rate(est_points, config.model.dimension);
  }
  return report;
}

ConsistencySummary estimator_consistency(const ExperimentConfig& config) {
  const Truth truth = model_truth(config);
  ConsistencySummary summary;
  summary.sigma2 = truth.sigma2;
  for (const std::int64_t n : config.n_schedule) {
    const Replicates reps = simulate(config, n);
    std::vector<double> dev(reps.chats.size());
    for (std::size_t r = 0; r < dev.size(); ++r)
      dev[r] = std::abs(reps.chats[r] - truth.sigma2);
    summary.rows.push_back({n, reps.bandwidth, mean_of(reps.chats),
                            sd_of(reps.chats), median_of(std::move(dev))});
  }
  for (std::size_t i = 1; i < summary.rows.size(); ++i)
    if (summary.rows[i].median_abs_dev < summary.rows[i - 1].median_abs_dev)
      ++summary.decreasing_steps;
  summary.monotone_decreasing =
      summary.decreasing_steps == static_cast<int>(summary.rows.size()) - 1;
  return summary;
}

std::vector<CoverageRow> coverage_study(const ExperimentConfig& config) {
  if (config.hypothesized_mean)
    fail(ErrorKind::Config,
         "coverage needs the model oracle mean, not a hypothesized value");
  if (config.levels.empty()) fail(ErrorKind::Config, "no confidence levels given");
  const Truth truth = model_truth(config);
  std::vector<CoverageRow> rows;
  for (const std::int64_t n : config.n_schedule) {
    const Replicates reps = simulate(config, n);
    require_positive_chats(reps);
    for (double level : config.levels)
      rows.push_back({n, level, coverage_of(reps, truth.mean, level, nullptr)});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Report output

void ExperimentReport::write_csv(std::ostream& out) const {
  out << "n,cube_size,mode,ks,chat_mean,chat_sd,sigma2,level,coverage\n";
  for (const auto& row : rows) {
    out << row.n << ',' << row.cube_size << ',' << to_string(row.mode) << ','
        << format_number(row.ks) << ',' << format_number(row.chat_mean) << ','
        << format_number(row.chat_sd) << ',' << format_number(row.sigma2) << ','
        << (row.level ? format_number(*row.level) : "") << ','
        << (row.coverage ? format_number(*row.coverage) : "") << '\n';
  }
}

std::string ExperimentReport::metadata_json() const {
  json j;
  j["config"] = json::parse(config.to_json());
  j["model_mean"] = model_mean;
  j["mean_used"] = mean_used;
  j["sigma2"] = sigma2;
  j["replicate_seed"] = "mix64(mix64(mix64(master_seed) + n) + replicate)";
  j["columns"] = {"n", "cube_size", "mode", "ks", "chat_mean", "chat_sd",
                  "sigma2", "level", "coverage"};
  json rates = json::object();
  if (true_sigma_rate)
    rates["true_sigma"] = {{"exponent", true_sigma_rate->exponent},
                           {"clamped", true_sigma_rate->clamped}};
  if (estimated_rate)
    rates["estimated"] = {{"exponent", estimated_rate->exponent},
                          {"clamped", estimated_rate->clamped}};
  j["fitted_rates"] = rates;
  return j.dump(2);
}

}  // namespace cvntcp
