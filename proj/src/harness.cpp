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

#include "evinlier/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include "evinlier/inference.hpp"
#include "evinlier/parallel.hpp"
#include "evinlier/sampler.hpp"

namespace evinlier {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::array<double, 7> filled(double v) {
  std::array<double, 7> a;
  a.fill(v);
  return a;
}

}  // namespace

void Scenario::validate() const {
  theta_true.validate();
  if (replications < 1)
    throw std::invalid_argument("Scenario: replications must be >= 1");
  if (n_values.empty())
    throw std::invalid_argument("Scenario: n_values must be non-empty");
  for (std::size_t n : n_values)
    if (n < 20) throw std::invalid_argument("Scenario: n must be >= 20");
  if (models.empty())
    throw std::invalid_argument("Scenario: models must be non-empty");
  if (!(ci_alpha > 0.0 && ci_alpha < 1.0))
    throw std::invalid_argument("Scenario: ci_alpha must lie in (0, 1)");
  if (bootstrap_B != 0 && bootstrap_B < 100)
    throw std::invalid_argument("Scenario: bootstrap_B must be 0 or >= 100");
  for (double p : phi1_grid) {
    if (!(p > 0.0) || !(p + theta_true.phi2 < 1.0))
      throw std::invalid_argument(
          "Scenario: phi1_grid value violates phi1 + phi2 < 1");
  }
}

namespace {

struct RepOutcome {
  bool converged = false;
  double loglik = 0.0;
  std::array<double, 7> estimate{};
  std::array<double, 7> covered{};  // 1/0/NaN per parameter
};

void run_cell(const Scenario& scenario, const FevimmParams& theta,
              std::size_t n, std::uint64_t cell_base, ModelKind model,
              const std::vector<std::vector<double>>& datasets,
              CellReport& cell, int threads) {
  const int reps = scenario.replications;
  std::vector<RepOutcome> outcomes(static_cast<std::size_t>(reps));

  parallel_for(static_cast<std::size_t>(reps), threads, [&](std::size_t r) {
    const Dataset data(datasets[r]);
    FitOptions opts;
    opts.threads = 1;
    opts.seed = cell_base + r;
    RepOutcome& out = outcomes[r];
    try {
      const FitResult fit = fit_model(data, model, opts);
      if (!fit.converged) return;
      out.converged = true;
      out.loglik = fit.loglik;
      out.estimate = params_to_array(fit.theta);
      out.covered = filled(kNaN);
      if (model == ModelKind::Fevimm) {
        // Wald CIs at theta-hat, the fitted threshold treated as fixed u0.
        try {
          const CiReport ci =
              asymptotic_ci(fit.theta, data.n(), scenario.ci_alpha);
          const std::array<double, 7> truth = params_to_array(theta);
          for (std::size_t j = 0; j < ci.labels.size(); ++j) {
            std::size_t idx = 0;
            while (idx < 7 && kParamNames[idx] != ci.labels[j]) ++idx;
            out.covered[idx] = (truth[idx] >= ci.lower[j] &&
                                truth[idx] <= ci.upper[j])
                                   ? 1.0
                                   : 0.0;
          }
        } catch (const std::exception&) {
          // singular information: contributes zero coverage
          for (std::size_t idx = 0; idx < 7; ++idx)
            if (idx != 3) out.covered[idx] = 0.0;
        }
      }
    } catch (const std::exception&) {
      // non-convergence is counted, not propagated
    }
  });

  cell.model = model;
  cell.n = n;
  cell.phi1_true = theta.phi1;
  cell.true_values = params_to_array(theta);
  cell.n_total = reps;

  std::vector<std::size_t> converged;
  for (std::size_t r = 0; r < outcomes.size(); ++r)
    if (outcomes[r].converged) converged.push_back(r);
  cell.n_converged = static_cast<int>(converged.size());
  for (std::size_t r : converged) cell.estimates.push_back(outcomes[r].estimate);

  cell.sample_mean = filled(kNaN);
  cell.bias = filled(kNaN);
  cell.mse = filled(kNaN);
  cell.bse = filled(kNaN);
  cell.bci_lower = filled(kNaN);
  cell.bci_upper = filled(kNaN);
  cell.coverage_pct = filled(kNaN);

  if (cell.n_converged * 5 < cell.n_total * 4) {
    cell.flagged = true;
    std::ostringstream msg;
    msg << "non-convergence above 20% (" << cell.n_total - cell.n_converged
        << " of " << cell.n_total << ")";
    cell.flag_reason = msg.str();
    return;
  }

  const double m = static_cast<double>(cell.n_converged);
  for (std::size_t j = 0; j < 7; ++j) {
    double mean = 0.0, mse = 0.0;
    for (const auto& e : cell.estimates) {
      mean += e[j];
      const double d = e[j] - cell.true_values[j];
      mse += d * d;
    }
    cell.sample_mean[j] = mean / m;
    cell.bias[j] = mean / m - cell.true_values[j];
    cell.mse[j] = mse / m;
  }

  if (model == ModelKind::Fevimm) {
    for (std::size_t j = 0; j < 7; ++j) {
      double covered = 0.0;
      std::size_t counted = 0;
      for (std::size_t r : converged) {
        if (std::isnan(outcomes[r].covered[j])) continue;
        covered += outcomes[r].covered[j];
        ++counted;
      }
      cell.coverage_pct[j] =
          counted > 0 ? 100.0 * covered / static_cast<double>(counted) : kNaN;
    }
  }

  if (scenario.bootstrap_B > 0 && !converged.empty()) {
    // Designated replication: median loglik among the converged ones.
    std::vector<std::size_t> by_loglik = converged;
    std::sort(by_loglik.begin(), by_loglik.end(),
              [&](std::size_t a, std::size_t b) {
                return outcomes[a].loglik < outcomes[b].loglik;
              });
    const std::size_t designated = by_loglik[by_loglik.size() / 2];

    FitResult anchor;
    anchor.model = model;
    anchor.theta = params_from_array(outcomes[designated].estimate);
    anchor.converged = true;
    anchor.parameter_count = model_parameter_count(model);
    try {
      FitOptions opts;
      opts.threads = 1;
      const BootstrapReport boot = parametric_bootstrap(
          anchor, n, scenario.bootstrap_B,
          cell_base + 0x40000000ULL, opts, threads);
      cell.bse = boot.se;
      cell.bci_lower = boot.ci_lower;
      cell.bci_upper = boot.ci_upper;
    } catch (const std::exception& e) {
      cell.flagged = true;
      cell.flag_reason = std::string("nested bootstrap failed: ") + e.what();
    }
  }
}

}  // namespace

SimReport run_scenario(const Scenario& scenario, int threads) {
  scenario.validate();
  SimReport report;
  report.scenario = scenario;

  std::vector<FevimmParams> variants;
  if (scenario.phi1_grid.empty()) {
    variants.push_back(scenario.theta_true);
  } else {
    for (double p : scenario.phi1_grid) {
      FevimmParams t = scenario.theta_true;
      t.phi1 = p;
      t.validate();
      variants.push_back(t);
    }
  }

  std::uint64_t cell_ordinal = 0;
  for (const auto& theta : variants) {
    for (std::size_t n : scenario.n_values) {
      const std::uint64_t cell_base =
          scenario.seed + cell_ordinal * 0x100000000ULL;
      ++cell_ordinal;

      // One dataset per replication, shared by every requested model.
      std::vector<std::vector<double>> datasets(
          static_cast<std::size_t>(scenario.replications));
      parallel_for(datasets.size(), threads, [&](std::size_t r) {
        datasets[r] = sample({n, theta, cell_base + r});
      });

      for (ModelKind model : scenario.models) {
        CellReport cell;
        run_cell(scenario, theta, n, cell_base, model, datasets, cell,
                 threads);
        report.cells.push_back(std::move(cell));
      }
    }
  }
  return report;
}

CellIdentity recompute_identities(const CellReport& cell) {
  CellIdentity id;
  const double m = static_cast<double>(cell.estimates.size());
  for (std::size_t j = 0; j < 7; ++j) {
    double mean = 0.0, mse = 0.0;
    for (const auto& e : cell.estimates) {
      mean += e[j];
      const double d = e[j] - cell.true_values[j];
      mse += d * d;
    }
    id.sample_mean[j] = mean / m;
    id.bias[j] = mean / m - cell.true_values[j];
    id.mse[j] = mse / m;
  }
  return id;
}

// ---------------------------------------------------------------------------
// Scenario config parsing (key = value; numbers, strings, arrays)
// ---------------------------------------------------------------------------

namespace {

struct RawValue {
  std::vector<std::string> items;  // singletons hold one entry
  bool is_array = false;
  int line = 0;
};

std::string strip(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_fail(int line, const std::string& what) {
  std::ostringstream msg;
  msg << "scenario parse error at line " << line << ": " << what;
  throw std::invalid_argument(msg.str());
}

double to_number(const RawValue& v) {
  if (v.is_array) parse_fail(v.line, "expected a scalar, found an array");
  try {
    std::size_t pos = 0;
    const double d = std::stod(v.items.at(0), &pos);
    if (pos != v.items[0].size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    parse_fail(v.line, "expected a number, found '" + v.items.at(0) + "'");
  }
}

std::string unquote(const std::string& s, int line) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
    return s.substr(1, s.size() - 2);
  parse_fail(line, "expected a quoted string, found '" + s + "'");
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  std::map<std::string, RawValue> values;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = strip(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) parse_fail(line_no, "expected key = value");
    const std::string key = strip(line.substr(0, eq));
    std::string rhs = strip(line.substr(eq + 1));
    if (key.empty() || rhs.empty())
      parse_fail(line_no, "expected key = value");

    RawValue v;
    v.line = line_no;
    if (rhs.front() == '[') {
      if (rhs.back() != ']') parse_fail(line_no, "unterminated array");
      v.is_array = true;
      rhs = rhs.substr(1, rhs.size() - 2);
      std::string item;
      std::istringstream items(rhs);
      while (std::getline(items, item, ',')) {
        item = strip(item);
        if (!item.empty()) v.items.push_back(item);
      }
    } else {
      v.items.push_back(rhs);
    }
    if (values.count(key)) parse_fail(line_no, "duplicate key '" + key + "'");
    values.emplace(key, std::move(v));
  }

  Scenario s;
  s.models.clear();
  auto take = [&](const char* key) -> RawValue* {
    auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  };

  if (auto* v = take("name")) s.name = unquote(v->items.at(0), v->line);
  const char* theta_keys[7] = {"phi1", "eta", "beta", "u",
                               "xi",   "sigma", "phi2"};
  double* theta_slots[7] = {&s.theta_true.phi1, &s.theta_true.eta,
                            &s.theta_true.beta, &s.theta_true.u,
                            &s.theta_true.xi,   &s.theta_true.sigma,
                            &s.theta_true.phi2};
  for (int i = 0; i < 7; ++i) {
    auto* v = take(theta_keys[i]);
    if (!v)
      throw std::invalid_argument(
          std::string("scenario: missing required key '") + theta_keys[i] +
          "'");
    *theta_slots[i] = to_number(*v);
  }
  if (auto* v = take("n_values")) {
    if (!v->is_array) parse_fail(v->line, "n_values must be an array");
    for (const auto& item : v->items) {
      RawValue one{{item}, false, v->line};
      const double d = to_number(one);
      if (d < 1 || d != std::floor(d))
        parse_fail(v->line, "n_values entries must be positive integers");
      s.n_values.push_back(static_cast<std::size_t>(d));
    }
  } else {
    throw std::invalid_argument("scenario: missing required key 'n_values'");
  }
  if (auto* v = take("replications"))
    s.replications = static_cast<int>(to_number(*v));
  if (auto* v = take("seed"))
    s.seed = static_cast<std::uint64_t>(to_number(*v));
  if (auto* v = take("bootstrap_B"))
    s.bootstrap_B = static_cast<int>(to_number(*v));
  if (auto* v = take("ci_alpha")) s.ci_alpha = to_number(*v);
  if (auto* v = take("models")) {
    if (!v->is_array) parse_fail(v->line, "models must be an array");
    for (const auto& item : v->items)
      s.models.push_back(model_from_name(unquote(item, v->line)));
  } else {
    s.models.push_back(ModelKind::Fevimm);
  }
  if (auto* v = take("phi1_grid")) {
    if (!v->is_array) parse_fail(v->line, "phi1_grid must be an array");
    for (const auto& item : v->items) {
      RawValue one{{item}, false, v->line};
      s.phi1_grid.push_back(to_number(one));
    }
  }

  static const char* known[] = {"name",  "phi1",  "eta",          "beta",
                                "u",     "xi",    "sigma",        "phi2",
                                "n_values", "replications", "seed",
                                "bootstrap_B", "ci_alpha", "models",
                                "phi1_grid"};
  for (const auto& [key, value] : values) {
    bool found = false;
    for (const char* k : known) found |= key == k;
    if (!found) parse_fail(value.line, "unknown key '" + key + "'");
  }

  s.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream file(path);
  if (!file)
    throw std::invalid_argument("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << file.rdbuf();
  return parse_scenario(buf.str());
}

}  // namespace evinlier
