// Copyright 2026 The evinlier authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front-end for the evinlier shared library. Talks to the
// library exclusively through the C API in evinlier.h.
//
// Exit codes: 0 success, 2 usage or input error, 3 numerical failure
// (a report is still written when one exists).

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "evinlier.h"

using json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return ec == std::errc() ? std::string(buf, ptr) : "nan";
}

[[noreturn]] void die(int code, const std::string& message) {
  std::cerr << "error: " << message << "\n";
  std::exit(code);
}

void check(evi_status status, int exit_code = kExitUsage) {
  if (status == EVI_OK) return;
  die(status == EVI_ERR_NONCONVERGENCE ? kExitNumeric : exit_code,
      std::string(evi_status_name(status)) + ": " + evi_last_error());
}

struct CsvBuffer {
  double* values = nullptr;
  size_t n = 0;
  ~CsvBuffer() { evi_buffer_free(values); }
};

CsvBuffer read_input(const std::string& path) {
  CsvBuffer buf;
  const evi_status st = evi_read_csv(path.c_str(), &buf.values, &buf.n);
  if (st != EVI_OK) die(kExitUsage, evi_last_error());
  return buf;
}

struct FitHandle {
  evi_fit* fit = nullptr;
  ~FitHandle() { evi_fit_free(fit); }
};

struct OwnedString {
  char* s = nullptr;
  ~OwnedString() { evi_string_free(s); }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) die(kExitUsage, "cannot open output file: " + path);
  out << content;
  if (!out) die(kExitUsage, "write failed: " + path);
}

void write_or_print(const std::optional<std::string>& path,
                    const std::string& content) {
  if (path && !path->empty())
    write_file(*path, content);
  else
    std::cout << content;
}

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("EVINLIER_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 0;  // library default: hardware concurrency
}

std::vector<double> parse_number_list(const std::string& text,
                                      const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (...) {
      die(kExitUsage, "cannot parse " + flag + " entry '" + item + "'");
    }
  }
  if (out.empty()) die(kExitUsage, flag + " is empty");
  return out;
}

// "lo:hi:step" inclusive grid.
std::vector<double> parse_range(const std::string& text,
                                const std::string& flag) {
  double lo = 0, hi = 0, step = 0;
  char c1 = 0, c2 = 0;
  std::istringstream ss(text);
  if (!(ss >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' ||
      step <= 0 || hi < lo)
    die(kExitUsage, "cannot parse " + flag + " range '" + text +
                        "' (expected lo:hi:step)");
  std::vector<double> out;
  for (double v = lo; v <= hi + 1e-12; v += step) out.push_back(v);
  return out;
}

evi_model model_from_string(const std::string& name) {
  if (name == "fevimm") return EVI_MODEL_FEVIMM;
  if (name == "fevmm") return EVI_MODEL_FEVMM;
  if (name == "evmm") return EVI_MODEL_EVMM;
  die(kExitUsage, "unknown model '" + name + "'");
}

std::vector<double> quantile_grid(const double* data, size_t n,
                                  const std::vector<double>& probs) {
  std::vector<double> sorted(data, data + n);
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  for (double p : probs) {
    const double h = (static_cast<double>(n) - 1.0) * p;
    const auto lo = static_cast<size_t>(h);
    out.push_back(lo + 1 >= n ? sorted.back()
                              : sorted[lo] + (h - static_cast<double>(lo)) *
                                                 (sorted[lo + 1] - sorted[lo]));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------

int cmd_simulate(size_t n, const evi_params& params, uint64_t seed,
                 const std::string& out_path) {
  std::vector<double> draws(n);
  check(evi_sample(&params, n, seed, draws.data()));

  std::ostringstream csv;
  csv << "x\n";
  size_t zeros = 0;
  double max_value = 0.0;
  for (double v : draws) {
    csv << fmt(v) << "\n";
    if (v == 0.0) ++zeros;
    max_value = std::max(max_value, v);
  }
  write_file(out_path, csv.str());
  std::cout << "n=" << n << " zeros=" << zeros << " max=" << fmt(max_value)
            << "\n";
  return kExitOk;
}

int cmd_fit(const std::string& input, const std::string& model_name,
            const std::string& method, const std::string& grid_spec,
            uint64_t seed, double alpha, int threads,
            const std::optional<std::string>& out_path) {
  const CsvBuffer data = read_input(input);
  const evi_model model = model_from_string(model_name);

  evi_fit_options options;
  evi_fit_options_init(&options);
  options.seed = seed;
  options.threads = threads;
  options.ci_alpha = alpha;

  std::vector<double> grid;
  if (method == "profile") {
    options.method = EVI_FIT_PROFILE;
    const std::vector<double> probs =
        grid_spec.empty() ? parse_range("0.80:0.95:0.01", "--grid")
                          : parse_range(grid_spec, "--grid");
    grid = quantile_grid(data.values, data.n, probs);
    options.threshold_grid = grid.data();
    options.threshold_grid_len = grid.size();
  } else if (method != "full") {
    die(kExitUsage, "unknown method '" + method + "' (full|profile)");
  }

  FitHandle handle;
  const evi_status st =
      evi_fit_data(data.values, data.n, model, &options, &handle.fit);
  if (st != EVI_OK && st != EVI_ERR_NONCONVERGENCE)
    die(kExitUsage, std::string(evi_status_name(st)) + ": " +
                        evi_last_error());

  OwnedString report;
  check(evi_fit_report_json(handle.fit, &report.s));
  write_or_print(out_path, std::string(report.s) + "\n");
  return st == EVI_OK ? kExitOk : kExitNumeric;
}

int cmd_gof(const std::string& input, const std::string& model_name, int B,
            uint64_t seed, int threads,
            const std::optional<std::string>& out_path) {
  if (B < 100) die(kExitUsage, "--B must be >= 100");
  const CsvBuffer data = read_input(input);
  OwnedString report;
  check(evi_gof_json(data.values, data.n, model_from_string(model_name), B,
                     seed, threads, &report.s),
        kExitNumeric);
  write_or_print(out_path, std::string(report.s) + "\n");
  return kExitOk;
}

std::string curve_csv(const std::string& abscissa_name,
                      const std::vector<double>& abscissa,
                      const std::vector<std::pair<std::string,
                                                  const std::vector<double>*>>&
                          columns,
                      const std::vector<int>& ok) {
  std::ostringstream csv;
  csv << abscissa_name;
  for (const auto& [name, values] : columns) csv << "," << name;
  csv << "\n";
  for (size_t i = 0; i < abscissa.size(); ++i) {
    if (!ok[i]) continue;
    csv << fmt(abscissa[i]);
    for (const auto& [name, values] : columns) csv << "," << fmt((*values)[i]);
    csv << "\n";
  }
  return csv.str();
}

int cmd_diagnose(const std::string& input, const std::string& threshold_spec,
                 const std::string& quantile_spec, const std::string& k_spec,
                 bool exclude_zeros, const std::string& out_dir) {
  const CsvBuffer raw = read_input(input);
  std::vector<double> data(raw.values, raw.values + raw.n);
  if (exclude_zeros) {
    std::erase(data, 0.0);
    if (data.empty()) die(kExitUsage, "no positive observations left");
  }

  std::vector<double> thresholds;
  if (!threshold_spec.empty()) {
    thresholds = parse_number_list(threshold_spec, "--thresholds");
    std::sort(thresholds.begin(), thresholds.end());
  } else {
    const std::vector<double> probs = parse_range(
        quantile_spec.empty() ? "0.50:0.95:0.05" : quantile_spec,
        "--threshold-quantiles");
    thresholds = quantile_grid(data.data(), data.size(), probs);
  }

  const size_t m = thresholds.size();
  std::vector<double> me(m), me_lo(m), me_hi(m);
  std::vector<int> me_ok(m);
  check(evi_mean_excess(data.data(), data.size(), thresholds.data(), m, 5,
                        me.data(), me_lo.data(), me_hi.data(), me_ok.data()));

  std::vector<double> ss(m), ss_lo(m), ss_hi(m), xi(m), xi_lo(m), xi_hi(m);
  std::vector<int> st_ok(m);
  check(evi_stability(data.data(), data.size(), thresholds.data(), m, 10,
                      ss.data(), ss_lo.data(), ss_hi.data(), xi.data(),
                      xi_lo.data(), xi_hi.data(), st_ok.data()));

  std::vector<size_t> ks;
  if (!k_spec.empty()) {
    for (double v : parse_number_list(k_spec, "--k-values"))
      ks.push_back(static_cast<size_t>(v));
  } else {
    // log-spaced defaults between 5 and n/4
    const size_t k_max = data.size() / 4;
    for (double k = 5; k <= static_cast<double>(k_max); k *= 1.35)
      ks.push_back(static_cast<size_t>(k));
    if (ks.empty() && k_max >= 1) ks.push_back(k_max);
  }
  std::vector<double> pk(ks.size());
  std::vector<int> pk_ok(ks.size());
  check(evi_pickands(data.data(), data.size(), ks.data(), ks.size(),
                     pk.data(), pk_ok.data()));

  int usable = 0;
  for (int f : me_ok) usable += f;
  for (int f : st_ok) usable += f;
  for (int f : pk_ok) usable += f;
  if (usable == 0)
    die(kExitNumeric, "no usable points on any diagnostic curve");

  write_file(out_dir + "/mean_excess.csv",
             curve_csv("threshold", thresholds,
                       {{"mean_excess", &me},
                        {"ci_lower", &me_lo},
                        {"ci_upper", &me_hi}},
                       me_ok));
  write_file(out_dir + "/stability_sigma.csv",
             curve_csv("threshold", thresholds,
                       {{"sigma_star", &ss},
                        {"ci_lower", &ss_lo},
                        {"ci_upper", &ss_hi}},
                       st_ok));
  write_file(out_dir + "/stability_xi.csv",
             curve_csv("threshold", thresholds,
                       {{"xi", &xi},
                        {"ci_lower", &xi_lo},
                        {"ci_upper", &xi_hi}},
                       st_ok));
  std::vector<double> k_abscissa(ks.begin(), ks.end());
  write_file(out_dir + "/pickands.csv",
             curve_csv("k", k_abscissa, {{"xi", &pk}}, pk_ok));
  std::cout << "wrote mean_excess.csv stability_sigma.csv stability_xi.csv "
               "pickands.csv to "
            << out_dir << "\n";
  return kExitOk;
}

int cmd_return_levels(const std::string& fit_report_path,
                      const std::string& periods_spec,
                      const std::string& input, int B, uint64_t seed,
                      int threads, const std::string& out_path) {
  std::ifstream in(fit_report_path);
  if (!in) die(kExitUsage, "cannot open fit report: " + fit_report_path);
  json report;
  try {
    in >> report;
  } catch (const std::exception& e) {
    die(kExitUsage, std::string("cannot parse fit report: ") + e.what());
  }
  if (!report.contains("estimates") || report["model"] != "fevimm")
    die(kExitUsage, "return-levels requires a fevimm fit report");
  const auto& est = report["estimates"];
  evi_params params{est["phi1"], est["eta"],   est["beta"], est["u"],
                    est["xi"],   est["sigma"], est["phi2"]};

  const std::vector<double> periods = parse_number_list(
      periods_spec.empty() ? "2,5,10,20,50,100" : periods_spec, "--periods");
  const size_t m = periods.size();
  std::vector<double> levels(m);
  std::vector<int> inside_atom(m);
  check(evi_return_levels(&params, periods.data(), m, levels.data(),
                          inside_atom.data()));

  std::vector<double> lo, hi;
  if (B > 0) {
    if (input.empty())
      die(kExitUsage, "--B bands require --input (data to size the refits)");
    const CsvBuffer data = read_input(input);
    evi_fit_options options;
    evi_fit_options_init(&options);
    options.seed = seed;
    options.threads = threads;
    FitHandle handle;
    const evi_status st = evi_fit_data(data.values, data.n, EVI_MODEL_FEVIMM,
                                       &options, &handle.fit);
    if (st != EVI_OK && st != EVI_ERR_NONCONVERGENCE)
      die(kExitUsage, evi_last_error());
    lo.resize(m);
    hi.resize(m);
    check(evi_return_level_bands(handle.fit, data.n, periods.data(), m, B,
                                 seed, threads, lo.data(), hi.data()),
          kExitNumeric);
  }

  std::ostringstream csv;
  csv << "period,level";
  if (!lo.empty()) csv << ",ci_lower,ci_upper";
  csv << ",inside_atom\n";
  for (size_t i = 0; i < m; ++i) {
    csv << fmt(periods[i]) << "," << fmt(levels[i]);
    if (!lo.empty()) csv << "," << fmt(lo[i]) << "," << fmt(hi[i]);
    csv << "," << inside_atom[i] << "\n";
  }
  write_or_print(out_path.empty() ? std::optional<std::string>{}
                                  : std::optional<std::string>{out_path},
                 csv.str());
  return kExitOk;
}

int cmd_bench(const std::string& scenario_path, const std::string& out_dir,
              int threads) {
  OwnedString report_json;
  check(evi_bench_run_file(scenario_path.c_str(), threads, &report_json.s));
  const json report = json::parse(report_json.s);

  write_file(out_dir + "/report.json", report.dump(2) + "\n");

  // Long-format CSV: model,n,parameter,metric,value.
  static const char* metrics[] = {"sample_mean", "bias",      "mse",
                                  "bse",         "bci_lower", "bci_upper",
                                  "coverage_pct"};
  std::ostringstream csv;
  csv << "model,n,parameter,metric,value\n";
  int flagged = 0;
  for (const auto& cell : report["cells"]) {
    const std::string model = cell["model"];
    const auto n = cell["n"].get<size_t>();
    if (cell["flagged"].get<bool>()) ++flagged;
    for (const char* metric : metrics) {
      for (const auto& [param, value] : cell[metric].items()) {
        if (value.is_null()) continue;
        csv << model << "," << n << "," << param << "," << metric << ","
            << fmt(value.get<double>()) << "\n";
      }
    }
  }
  write_file(out_dir + "/report.csv", csv.str());

  // Per-cell estimate matrices.
  for (const auto& cell : report["cells"]) {
    std::ostringstream name;
    name << out_dir << "/estimates_" << cell["model"].get<std::string>()
         << "_n" << cell["n"].get<size_t>();
    if (report["cells"].size() > 1 && cell.contains("phi1_true"))
      name << "_phi1_" << fmt(cell["phi1_true"].get<double>());
    name << ".csv";
    std::ostringstream est;
    est << "phi1,eta,beta,u,xi,sigma,phi2\n";
    for (const auto& row : cell["estimates"]) {
      for (size_t j = 0; j < 7; ++j)
        est << (j ? "," : "") << fmt(row[j].get<double>());
      est << "\n";
    }
    write_file(name.str(), est.str());
  }

  std::cout << "cells=" << report["cells"].size() << " flagged=" << flagged;
  if (flagged > 0) {
    std::cout << " (";
    bool first = true;
    for (const auto& cell : report["cells"]) {
      if (!cell["flagged"].get<bool>()) continue;
      if (!first) std::cout << "; ";
      std::cout << cell["model"].get<std::string>() << " n="
                << cell["n"].get<size_t>() << ": "
                << cell["flag_reason"].get<std::string>();
      first = false;
    }
    std::cout << ")";
  }
  std::cout << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evinlier: extreme value modeling with inliers at zero"};
  app.require_subcommand(1);
  int threads_flag = 0;
  app.add_option("--threads", threads_flag,
                 "worker cap (default: EVINLIER_THREADS or all cores)");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "draw a sample");
  size_t sim_n = 0;
  uint64_t sim_seed = 0;
  evi_params sim_params{0.4, 1.0, 5.0, 11.5129, 0.2, 5.0, 0.1};
  std::string sim_out = "sample.csv";
  simulate->add_option("--n", sim_n, "sample size")->required();
  simulate->add_option("--seed", sim_seed, "RNG seed");
  simulate->add_option("--phi1", sim_params.phi1, "zero-inflation mass");
  simulate->add_option("--eta", sim_params.eta, "gamma shape");
  simulate->add_option("--beta", sim_params.beta, "gamma scale");
  simulate->add_option("--u", sim_params.u, "threshold");
  simulate->add_option("--xi", sim_params.xi, "GPD shape");
  simulate->add_option("--sigma", sim_params.sigma, "GPD scale");
  simulate->add_option("--phi2", sim_params.phi2, "tail fraction");
  simulate->add_option("--out", sim_out, "output CSV path");

  // fit
  auto* fit = app.add_subcommand("fit", "maximum-likelihood fit");
  std::string fit_input, fit_model = "fevimm", fit_method = "full";
  std::string fit_grid;
  uint64_t fit_seed = 0;
  double fit_alpha = 0.05;
  std::string fit_out;
  fit->add_option("--input", fit_input, "CSV input")->required();
  fit->add_option("--model", fit_model, "fevimm|fevmm|evmm");
  fit->add_option("--method", fit_method, "full|profile");
  fit->add_option("--grid", fit_grid,
                  "profile threshold quantiles lo:hi:step");
  fit->add_option("--seed", fit_seed, "restart jitter seed");
  fit->add_option("--alpha", fit_alpha, "CI level");
  fit->add_option("--out", fit_out, "report path (default: stdout)");

  // gof
  auto* gof = app.add_subcommand("gof", "goodness of fit with bootstrap p");
  std::string gof_input, gof_model = "fevimm", gof_out;
  int gof_B = 500;
  uint64_t gof_seed = 0;
  gof->add_option("--input", gof_input, "CSV input")->required();
  gof->add_option("--model", gof_model, "fevimm|fevmm|evmm");
  gof->add_option("--B", gof_B, "bootstrap replications (>= 100)");
  gof->add_option("--seed", gof_seed, "bootstrap seed");
  gof->add_option("--out", gof_out, "report path (default: stdout)");

  // diagnose
  auto* diagnose = app.add_subcommand(
      "diagnose", "mean-excess / stability / Pickands curves");
  std::string diag_input, diag_thresholds, diag_quantiles, diag_ks;
  std::string diag_out_dir = ".";
  bool diag_exclude_zeros = false;
  diagnose->add_option("--input", diag_input, "CSV input")->required();
  diagnose->add_option("--thresholds", diag_thresholds,
                       "explicit thresholds a,b,c");
  diagnose->add_option("--threshold-quantiles", diag_quantiles,
                       "quantile grid lo:hi:step (default 0.50:0.95:0.05)");
  diagnose->add_option("--k-values", diag_ks, "Pickands k list a,b,c");
  diagnose->add_flag("--exclude-zeros", diag_exclude_zeros,
                     "drop exact zeros before computing the curves");
  diagnose->add_option("--out-dir", diag_out_dir, "output directory");

  // return-levels
  auto* rlevels = app.add_subcommand("return-levels", "return level curve");
  std::string rl_fit, rl_periods, rl_input, rl_out;
  int rl_B = 0;
  uint64_t rl_seed = 0;
  rlevels->add_option("--fit", rl_fit, "fevimm fit report JSON")->required();
  rlevels->add_option("--periods", rl_periods,
                      "return periods a,b,c (default 2,5,10,20,50,100)");
  rlevels->add_option("--input", rl_input, "data CSV (needed for bands)");
  rlevels->add_option("--B", rl_B, "bootstrap size for bands (0 = none)");
  rlevels->add_option("--seed", rl_seed, "bootstrap seed");
  rlevels->add_option("--out", rl_out, "curve CSV path (default: stdout)");

  // bench
  auto* bench = app.add_subcommand("bench", "run a simulation scenario");
  std::string bench_scenario, bench_out_dir = ".";
  bench->add_option("--scenario", bench_scenario, "scenario file")
      ->required();
  bench->add_option("--out-dir", bench_out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  const int threads = resolve_threads(threads_flag);
  try {
    if (simulate->parsed())
      return cmd_simulate(sim_n, sim_params, sim_seed, sim_out);
    if (fit->parsed())
      return cmd_fit(fit_input, fit_model, fit_method, fit_grid, fit_seed,
                     fit_alpha, threads,
                     fit_out.empty() ? std::optional<std::string>{}
                                     : std::optional<std::string>{fit_out});
    if (gof->parsed())
      return cmd_gof(gof_input, gof_model, gof_B, gof_seed, threads,
                     gof_out.empty() ? std::optional<std::string>{}
                                     : std::optional<std::string>{gof_out});
    if (diagnose->parsed())
      return cmd_diagnose(diag_input, diag_thresholds, diag_quantiles,
                          diag_ks, diag_exclude_zeros, diag_out_dir);
    if (rlevels->parsed())
      return cmd_return_levels(rl_fit, rl_periods, rl_input, rl_B, rl_seed,
                               threads, rl_out);
    if (bench->parsed())
      return cmd_bench(bench_scenario, bench_out_dir, threads);
  } catch (const std::exception& e) {
    die(kExitNumeric, e.what());
  }
  return kExitUsage;
}
