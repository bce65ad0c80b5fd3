// Copyright 2026 The cvntcp Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end. Links only the C interface of libcvntcp.
//
// Output formats (--format):
//   text  header line starting with '#', then one space-separated row per line
//   csv   header line, then comma-separated rows
//   json  array of objects, one per row
// Numbers are printed with 9 significant digits. Exit status: 0 success,
// 1 domain/model errors, 2 usage, configuration and I/O errors.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cvntcp/cvntcp.h"

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

struct Failure {
  int code;
  std::string message;
};

void check(cvntcp_status status) {
  if (status == CVNTCP_OK) return;
  const bool usage = status == CVNTCP_ERR_IO || status == CVNTCP_ERR_CONFIG ||
                     status == CVNTCP_ERR_NULL_ARGUMENT;
  throw Failure{usage ? kExitUsage : kExitDomain,
                std::string(cvntcp_status_name(status)) + ": " +
                    cvntcp_last_error()};
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string num(std::int64_t v) { return std::to_string(v); }

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<bool> numeric;  // per column: emit unquoted in JSON

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

std::string json_escape(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

void print(const Table& t, const std::string& format) {
  if (format == "json") {
    std::cout << "[";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      std::cout << (r ? ",\n " : "\n ") << "{";
      for (std::size_t c = 0; c < t.columns.size(); ++c) {
        const std::string& cell = t.rows[r][c];
        std::cout << (c ? ", " : "") << json_escape(t.columns[c]) << ": "
                  << (cell.empty() ? "null"
                      : t.numeric[c] ? cell
                                     : json_escape(cell));
      }
      std::cout << "}";
    }
    std::cout << "\n]\n";
    return;
  }
  const char sep = format == "csv" ? ',' : ' ';
  if (format == "text") std::cout << "# ";
  for (std::size_t c = 0; c < t.columns.size(); ++c)
    std::cout << (c ? std::string(1, sep) : "") << t.columns[c];
  std::cout << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      const std::string cell = row[c].empty() && format == "text" ? "-" : row[c];
      std::cout << (c ? std::string(1, sep) : "") << cell;
    }
    std::cout << '\n';
  }
}

// Key/value/parameter table shared by the scalar-reporting subcommands.
Table quantity_table() {
  return {{"quantity", "parameter", "value"}, {}, {false, true, true}};
}

template <class T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using DoseModelPtr =
    std::unique_ptr<cvntcp_dose_model,
                    Deleter<cvntcp_dose_model, cvntcp_dose_model_destroy>>;
using FieldModelPtr =
    std::unique_ptr<cvntcp_field_model,
                    Deleter<cvntcp_field_model, cvntcp_field_model_destroy>>;
using SamplePtr =
    std::unique_ptr<cvntcp_field_sample,
                    Deleter<cvntcp_field_sample, cvntcp_field_sample_destroy>>;

// ---------------------------------------------------------------------------

struct DoseFlags {
  std::string kind = "single-hit";
  double alpha = 1.0;
  double beta = 0.0;
  int targets = 1;
  std::int64_t cells = 1;

  void attach(CLI::App* app) {
    app->add_option("--dose-model", kind, "Surviving-fraction curve")
        ->check(CLI::IsMember({"single-hit", "multi-target", "hybrid", "lq"}));
    app->add_option("--alpha", alpha, "Radiosensitivity per unit dose");
    app->add_option("--beta", beta, "Secondary rate (hybrid, lq)");
    app->add_option("--targets", targets, "Targets per cell (multi-target, hybrid)");
    app->add_option("--cells", cells, "Cells per FSU (n0)");
  }

  DoseModelPtr build() const {
    cvntcp_dose_kind k = CVNTCP_SINGLE_HIT;
    if (kind == "multi-target") k = CVNTCP_MULTI_TARGET;
    if (kind == "hybrid") k = CVNTCP_HYBRID;
    if (kind == "lq") k = CVNTCP_LINEAR_QUADRATIC;
    cvntcp_dose_model* m = nullptr;
    check(cvntcp_dose_model_create(k, alpha, beta, targets, &m));
    return DoseModelPtr(m);
  }
};

// ---- ntcp -----------------------------------------------------------------

struct NtcpArgs {
  std::int64_t n = 0;
  double p = 0.0;
  std::optional<std::int64_t> threshold;
  std::optional<double> x;
  std::optional<std::int64_t> k, m;
  std::optional<double> gamma;
  std::string method = "all";
};

void run_ntcp(const NtcpArgs& a, const std::string& format) {
  Table t{{"method", "threshold", "value", "error_bound", "certified"},
          {},
          {false, true, true, true, true}};
  const bool all = a.method == "all";
  if (!a.threshold && !a.x && a.method != "integer" &&
      !(a.method == "weiss" && a.k))
    throw Failure{kExitUsage, "ntcp needs --L or --x"};
  const double x = a.x ? *a.x : static_cast<double>(a.threshold.value_or(0));
  const std::int64_t L =
      a.threshold ? *a.threshold : static_cast<std::int64_t>(std::ceil(x));

  const auto add_approx = [&](const char* name, const std::string& thr,
                              const cvntcp_approx& r) {
    t.add({name, thr, num(r.value), r.certified ? num(r.error_bound) : "",
           r.certified ? "1" : "0"});
  };
  if (all || a.method == "exact") {
    double v = 0.0;
    check(cvntcp_ntcp_exact(a.n, a.p, L, &v));
    t.add({"exact", num(L), num(v), num(0.0), "1"});
  }
  if (all || a.method == "normal") {
    cvntcp_approx r{};
    check(cvntcp_ntcp_normal(a.n, a.p, x, &r));
    add_approx("normal", num(x), r);
  }
  if ((all && a.gamma) || a.method == "integer") {
    if (!a.gamma) throw Failure{kExitUsage, "--method integer needs --gamma"};
    std::int64_t thr = 0;
    cvntcp_approx r{};
    check(cvntcp_ntcp_normal_integer_threshold(a.n, a.p, *a.gamma, &thr, &r));
    add_approx("normal-integer", num(thr), r);
  }
  if (all || a.method == "weiss") {
    const std::int64_t k = a.k.value_or(L);
    const std::int64_t m = a.m.value_or(a.n);
    cvntcp_approx r{};
    check(cvntcp_ntcp_weiss(a.n, a.p, k, m, &r));
    add_approx("weiss", num(k) + ":" + num(m), r);
  }
  t.numeric[1] = false;
  print(t, format);
}

// ---- threshold ------------------------------------------------------------

struct ThresholdArgs {
  std::int64_t n = 0;
  double p = 0.0;
  double gamma = 0.5;
  std::optional<double> kappa;
};

void run_threshold(const ThresholdArgs& a, const std::string& format) {
  Table t = quantity_table();
  double x = 0.0;
  check(cvntcp_threshold_for_confidence(a.n, a.p, a.gamma, &x));
  t.add({"x_gamma", "", num(x)});
  std::int64_t L = 0;
  cvntcp_approx r{};
  check(cvntcp_ntcp_normal_integer_threshold(a.n, a.p, a.gamma, &L, &r));
  t.add({"L_gamma", "", num(L)});
  t.add({"ntcp_approx", "", num(r.value)});
  t.add({"error_bound", "", num(r.error_bound)});
  double z = 0.0;
  check(cvntcp_normal_quantile(a.gamma, &z));
  const double c = z / std::sqrt(static_cast<double>(a.n));
  t.add({"z_gamma", "", num(z)});
  t.add({"c", "", num(c)});
  if (c >= 0.0) {
    cvntcp_fraction_features f{};
    check(cvntcp_fraction_curve_features(c, &f));
    double kappa_now = 0.0;
    check(cvntcp_kill_fraction(a.p, c, &kappa_now));
    t.add({"kappa", "", num(kappa_now)});
    t.add({"p1", "", num(f.p1)});
    t.add({"p_star", "", num(f.p_star)});
    t.add({"kappa_star", "", num(f.kappa_star)});
    if (a.kappa) {
      double p_bar = 0.0;
      check(cvntcp_invert_fraction(*a.kappa, c, &p_bar));
      t.add({"p_bar", num(*a.kappa), num(p_bar)});
    }
  } else if (a.kappa) {
    throw Failure{kExitDomain, "kill-fraction inversion needs --gamma >= 0.5"};
  }
  print(t, format);
}

// ---- dose -----------------------------------------------------------------

struct DoseArgs {
  DoseFlags model;
  std::optional<double> target_p;
  std::optional<double> kappa;
  std::int64_t n = 1;
  double gamma = 0.5;
  double tolerance = 1e-10;
};

void run_dose(const DoseArgs& a, const std::string& format) {
  const auto model = a.model.build();
  Table t = quantity_table();
  double dose = 0.0;
  if (a.target_p) {
    check(cvntcp_dose_for_kill_probability(model.get(), a.model.cells,
                                           *a.target_p, a.tolerance, &dose));
  } else if (a.kappa) {
    check(cvntcp_dose_for_fraction(model.get(), a.model.cells, *a.kappa, a.n,
                                   a.gamma, a.tolerance, &dose));
  } else {
    throw Failure{kExitUsage, "dose needs --p or --kappa"};
  }
  double p = 0.0, sf = 0.0;
  check(cvntcp_fsu_kill_probability(model.get(), a.model.cells, dose, &p));
  check(cvntcp_surviving_fraction(model.get(), dose, &sf));
  t.add({"dose", "", num(dose)});
  t.add({"kill_probability", "", num(p)});
  t.add({"surviving_fraction", "", num(sf)});
  if (a.kappa) {
    double z = 0.0;
    check(cvntcp_normal_quantile(a.gamma, &z));
    const double c = z / std::sqrt(static_cast<double>(a.n));
    double p_bar = 0.0, kappa = 0.0;
    check(cvntcp_invert_fraction(*a.kappa, c, &p_bar));
    check(cvntcp_kill_fraction(p, c, &kappa));
    t.add({"p_bar", "", num(p_bar)});
    t.add({"kappa", "", num(kappa)});
  }
  print(t, format);
}

// ---- simulate -------------------------------------------------------------

struct SimulateArgs {
  std::string model = "iid";
  int dimension = 1;
  int radius = 1;
  std::optional<double> probability;  // p for iid, theta otherwise
  std::optional<double> dose;
  DoseFlags dose_model;
  std::int64_t k_min = -1;
  int levels = 5;
  std::int64_t n = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string encoding = "binary";
};

FieldModelPtr build_field_model(const SimulateArgs& a) {
  double q = 0.0;
  if (a.dose) {
    const auto dm = a.dose_model.build();
    check(cvntcp_fsu_kill_probability(dm.get(), a.dose_model.cells, *a.dose, &q));
  } else if (a.probability) {
    q = *a.probability;
  } else {
    throw Failure{kExitUsage, "simulate needs --p/--theta or --dose"};
  }
  cvntcp_field_model* m = nullptr;
  if (a.model == "iid") {
    check(cvntcp_field_model_iid(a.dimension, q, &m));
  } else if (a.model == "majority") {
    check(cvntcp_field_model_majority(a.dimension, a.radius, q, &m));
  } else if (a.model == "threshold") {
    if (a.k_min < 0) throw Failure{kExitUsage, "--model threshold needs --k-min"};
    check(cvntcp_field_model_threshold(a.dimension, a.radius, q, a.k_min, &m));
  } else {
    check(cvntcp_field_model_levels(a.dimension, a.radius, q, a.levels, &m));
  }
  return FieldModelPtr(m);
}

void run_simulate(const SimulateArgs& a, const std::string& format) {
  const auto model = build_field_model(a);
  cvntcp_field_sample* raw = nullptr;
  check(cvntcp_sample_field(model.get(), a.n, a.seed, &raw));
  const SamplePtr sample(raw);
  check(cvntcp_field_sample_save(
      sample.get(), a.out.c_str(),
      a.encoding == "csv" ? CVNTCP_ENCODING_CSV : CVNTCP_ENCODING_BINARY));
  double sum = 0.0;
  check(cvntcp_partial_sum(sample.get(), nullptr, nullptr, &sum));
  const auto size = static_cast<std::int64_t>(cvntcp_field_sample_size(sample.get()));
  Table t = quantity_table();
  t.add({"file", a.out, ""});
  t.add({"cube_size", "", num(size)});
  t.add({"sum", "", num(sum)});
  t.add({"sample_mean", "", num(sum / static_cast<double>(size))});
  t.numeric[1] = false;
  print(t, format);
}

// ---- estimate -------------------------------------------------------------

struct EstimateArgs {
  std::string in;
  std::int64_t bandwidth = 0;
  std::vector<double> levels{0.95};
  std::vector<double> xs;
  std::optional<double> mean;
};

void run_estimate(const EstimateArgs& a, const std::string& format) {
  cvntcp_field_sample* raw = nullptr;
  check(cvntcp_field_sample_load(a.in.c_str(), &raw));
  const SamplePtr sample(raw);
  cvntcp_field_model* model_raw = nullptr;
  check(cvntcp_field_sample_model(sample.get(), &model_raw));
  const FieldModelPtr model(model_raw);

  const std::int64_t n = cvntcp_field_sample_half_width(sample.get());
  const auto size = static_cast<std::int64_t>(cvntcp_field_sample_size(sample.get()));
  const std::int64_t b = a.bandwidth > 0 ? a.bandwidth : cvntcp_default_bandwidth(n);
  double sum = 0.0, chat = 0.0, model_mean = 0.0;
  check(cvntcp_partial_sum(sample.get(), nullptr, nullptr, &sum));
  check(cvntcp_variance_estimator(sample.get(), b, &chat));
  check(cvntcp_model_mean(model.get(), &model_mean));
  const double mean = a.mean.value_or(model_mean);

  Table t = quantity_table();
  t.add({"half_width", "", num(n)});
  t.add({"cube_size", "", num(size)});
  t.add({"bandwidth", "", num(b)});
  t.add({"sum", "", num(sum)});
  t.add({"sample_mean", "", num(sum / static_cast<double>(size))});
  t.add({"chat", "", num(chat)});
  t.add({"model_mean", "", num(model_mean)});
  t.add({"mean_used", "", num(mean)});
  cvntcp_normalized_statistic stat{};
  check(cvntcp_self_normalized_statistic(sample.get(), mean, b, 0.0, &stat));
  t.add({"statistic", "", num(stat.value)});
  for (double level : a.levels) {
    double lo = 0.0, hi = 0.0;
    check(cvntcp_confidence_interval(sample.get(), level, b, &lo, &hi));
    t.add({"ci_lo", num(level), num(lo)});
    t.add({"ci_hi", num(level), num(hi)});
  }
  for (double x : a.xs) {
    double v = 0.0;
    check(cvntcp_ntcp_estimate(sample.get(), x, mean, b, &v));
    t.add({"ntcp_estimate", num(x), num(v)});
  }
  print(t, format);
}

// ---- experiment -----------------------------------------------------------

struct ExperimentArgs {
  std::string config;
  std::string out = "report.csv";
  std::string meta;
  unsigned threads = 0;
};

void run_experiment(const ExperimentArgs& a, const std::string& format) {
  const std::string meta = a.meta.empty() ? a.out + ".meta.json" : a.meta;
  check(cvntcp_run_experiment_file(a.config.c_str(), a.out.c_str(),
                                   meta.c_str(), a.threads));
  Table t = quantity_table();
  t.add({"report", a.out, ""});
  t.add({"metadata", meta, ""});
  t.numeric[1] = false;
  print(t, format);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical-volume NTCP and dependent lattice-field statistics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(cvntcp_version()));
  std::string format = "text";
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "csv", "json"}));

  NtcpArgs ntcp;
  auto* ntcp_cmd = app.add_subcommand("ntcp", "NTCP for n independent FSUs");
  ntcp_cmd->fallthrough();
  ntcp_cmd->add_option("--n", ntcp.n, "FSU count")->required();
  ntcp_cmd->add_option("--p", ntcp.p, "FSU kill probability")->required();
  auto* opt_L = ntcp_cmd->add_option("--L", ntcp.threshold, "Integer threshold");
  ntcp_cmd->add_option("--x", ntcp.x, "Real threshold")->excludes(opt_L);
  ntcp_cmd->add_option("--k", ntcp.k, "Weiss lower count");
  ntcp_cmd->add_option("--m", ntcp.m, "Weiss upper count");
  ntcp_cmd->add_option("--gamma", ntcp.gamma, "Confidence for the integer threshold");
  ntcp_cmd->add_option("--method", ntcp.method)
      ->check(CLI::IsMember({"all", "exact", "normal", "integer", "weiss"}));

  ThresholdArgs thr;
  auto* thr_cmd = app.add_subcommand("threshold", "Threshold and kill-fraction calculus");
  thr_cmd->fallthrough();
  thr_cmd->add_option("--n", thr.n)->required();
  thr_cmd->add_option("--p", thr.p)->required();
  thr_cmd->add_option("--gamma", thr.gamma)->required();
  thr_cmd->add_option("--kappa", thr.kappa, "Kill fraction to invert");

  DoseArgs dose;
  auto* dose_cmd = app.add_subcommand("dose", "Dose for a kill probability or fraction");
  dose_cmd->fallthrough();
  dose.model.attach(dose_cmd);
  auto* opt_p = dose_cmd->add_option("--p", dose.target_p, "Target FSU kill probability");
  dose_cmd->add_option("--kappa", dose.kappa, "Target kill fraction")->excludes(opt_p);
  dose_cmd->add_option("--n", dose.n, "FSU count for the kill fraction");
  dose_cmd->add_option("--gamma", dose.gamma, "Confidence for the kill fraction");
  dose_cmd->add_option("--tol", dose.tolerance, "Absolute tolerance");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Sample a lattice field to a file");
  sim_cmd->fallthrough();
  sim_cmd->add_option("--model", sim.model)
      ->check(CLI::IsMember({"iid", "majority", "threshold", "levels"}));
  sim_cmd->add_option("--dim", sim.dimension)->check(CLI::Range(1, 3));
  sim_cmd->add_option("--radius", sim.radius);
  auto* opt_prob = sim_cmd->add_option("--p,--theta", sim.probability,
                                       "Site or noise probability");
  sim_cmd->add_option("--dose", sim.dose, "Derive the probability from a dose")
      ->excludes(opt_prob);
  sim.dose_model.attach(sim_cmd);
  sim_cmd->add_option("--k-min", sim.k_min);
  sim_cmd->add_option("--levels", sim.levels);
  sim_cmd->add_option("--n", sim.n, "Cube half-width")->required();
  sim_cmd->add_option("--seed", sim.seed);
  sim_cmd->add_option("--out", sim.out)->required();
  sim_cmd->add_option("--encoding", sim.encoding)
      ->check(CLI::IsMember({"binary", "csv"}));

  EstimateArgs est;
  auto* est_cmd = app.add_subcommand("estimate", "Estimators on a sample file");
  est_cmd->fallthrough();
  est_cmd->add_option("--in", est.in)->required();
  est_cmd->add_option("--b", est.bandwidth, "Block radius (0 = default)");
  est_cmd->add_option("--level", est.levels, "Confidence levels");
  est_cmd->add_option("--x", est.xs, "Thresholds for NTCP estimates");
  est_cmd->add_option("--mean", est.mean, "Mean (default: model mean)");

  ExperimentArgs exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Run a Monte Carlo campaign");
  exp_cmd->fallthrough();
  exp_cmd->add_option("--config", exp.config)->required();
  exp_cmd->add_option("--out", exp.out, "Report CSV path");
  exp_cmd->add_option("--meta", exp.meta, "Metadata JSON path");
  exp_cmd->add_option("--threads", exp.threads);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    std::cout << cvntcp_version() << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "cvntcp: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*ntcp_cmd) run_ntcp(ntcp, format);
    if (*thr_cmd) run_threshold(thr, format);
    if (*dose_cmd) run_dose(dose, format);
    if (*sim_cmd) run_simulate(sim, format);
    if (*est_cmd) run_estimate(est, format);
    if (*exp_cmd) run_experiment(exp, format);
  } catch (const Failure& f) {
    std::cerr << "cvntcp: " << f.message << '\n';
    return f.code;
  }
  return 0;
}
