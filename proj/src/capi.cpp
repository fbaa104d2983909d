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

#include "evinlier.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include <json.hpp>

#include "evinlier/diagnostics.hpp"
#include "evinlier/estimation.hpp"
#include "evinlier/harness.hpp"
#include "evinlier/inference.hpp"
#include "evinlier/io.hpp"
#include "evinlier/model.hpp"
#include "evinlier/sampler.hpp"

using json = nlohmann::json;

namespace {

thread_local std::string g_last_error;

evi_status set_error(evi_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Exceptions map onto the error-code surface here; the C++ core throws.
template <typename Fn>
evi_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::domain_error& e) {
    return set_error(EVI_ERR_DOMAIN, e.what());
  } catch (const std::invalid_argument& e) {
    return set_error(EVI_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return set_error(EVI_ERR_NUMERIC, "out of memory");
  } catch (const std::exception& e) {
    return set_error(EVI_ERR_NUMERIC, e.what());
  }
}

evinlier::FevimmParams to_core(const evi_params& p) {
  return {p.phi1, p.eta, p.beta, p.u, p.xi, p.sigma, p.phi2};
}

evi_params from_core(const evinlier::FevimmParams& p) {
  return {p.phi1, p.eta, p.beta, p.u, p.xi, p.sigma, p.phi2};
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

evinlier::ModelKind to_kind(evi_model model) {
  switch (model) {
    case EVI_MODEL_FEVIMM: return evinlier::ModelKind::Fevimm;
    case EVI_MODEL_FEVMM: return evinlier::ModelKind::Fevmm;
    case EVI_MODEL_EVMM: return evinlier::ModelKind::Evmm;
  }
  throw std::invalid_argument("unknown model id");
}

evinlier::FitOptions to_fit_options(const evi_fit_options* options) {
  evinlier::FitOptions out;
  if (!options) return out;
  if (options->max_iterations > 0) out.max_iterations = options->max_iterations;
  if (options->restarts >= 0) out.restarts = options->restarts;
  if (options->tolerance > 0) out.tolerance = options->tolerance;
  out.seed = options->seed;
  if (options->threads > 0) out.threads = options->threads;
  return out;
}

json params_json(const evinlier::FevimmParams& theta,
                 evinlier::ModelKind kind) {
  json j;
  if (kind == evinlier::ModelKind::Fevimm) j["phi1"] = theta.phi1;
  j["eta"] = theta.eta;
  j["beta"] = theta.beta;
  j["u"] = theta.u;
  j["xi"] = theta.xi;
  j["sigma"] = theta.sigma;
  j["phi2"] = theta.phi2;
  return j;
}

}  // namespace

struct evi_fit {
  evinlier::FitResult result;
  std::size_t n = 0;  // observed sample size, reused by band refits
  std::size_t n_zero = 0;
  double ci_alpha = 0.05;
};

extern "C" {

const char* evi_version(void) { return "0.1.0"; }

const char* evi_status_name(evi_status status) {
  switch (status) {
    case EVI_OK: return "ok";
    case EVI_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case EVI_ERR_DOMAIN: return "domain_error";
    case EVI_ERR_IO: return "io_error";
    case EVI_ERR_NONCONVERGENCE: return "nonconvergence";
    case EVI_ERR_NUMERIC: return "numeric_error";
  }
  return "unknown";
}

const char* evi_last_error(void) { return g_last_error.c_str(); }

void evi_string_free(char* s) { delete[] s; }
void evi_buffer_free(double* p) { delete[] p; }

evi_status evi_pdf(const evi_params* params, double x, double* out) {
  if (!params || !out)
    return set_error(EVI_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = evinlier::pdf(x, to_core(*params));
    return EVI_OK;
  });
}

evi_status evi_cdf(const evi_params* params, double x, double* out) {
  if (!params || !out)
    return set_error(EVI_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = evinlier::cdf(x, to_core(*params));
    return EVI_OK;
  });
}

evi_status evi_quantile(const evi_params* params, double p, double* out) {
  if (!params || !out)
    return set_error(EVI_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = evinlier::quantile(p, to_core(*params));
    return EVI_OK;
  });
}

evi_status evi_tail_value_at_risk(const evi_params* params, double p,
                                  double* out) {
  if (!params || !out)
    return set_error(EVI_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = evinlier::tail_value_at_risk(p, to_core(*params));
    return EVI_OK;
  });
}

evi_status evi_sample(const evi_params* params, size_t n, uint64_t seed,
                      double* out) {
  if (!params || !out)
    return set_error(EVI_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto draws = evinlier::sample({n, to_core(*params), seed});
    std::memcpy(out, draws.data(), n * sizeof(double));
    return EVI_OK;
  });
}

void evi_fit_options_init(evi_fit_options* options) {
  if (!options) return;
  options->method = EVI_FIT_FULL;
  options->threshold_grid = nullptr;
  options->threshold_grid_len = 0;
  options->max_iterations = 0;
  options->restarts = -1;
  options->tolerance = 0.0;
  options->seed = 0;
  options->threads = 0;
  options->ci_alpha = 0.0;
}

evi_status evi_fit_data(const double* data, size_t n, evi_model model,
                        const evi_fit_options* options, evi_fit** out) {
  if (!data || !out || n == 0)
    return set_error(EVI_ERR_INVALID_ARGUMENT, "null or empty data");
  return guarded([&]() -> evi_status {
    const evinlier::Dataset dataset(std::vector<double>(data, data + n));
    const evinlier::FitOptions opts = to_fit_options(options);
    const evinlier::ModelKind kind = to_kind(model);

    evinlier::FitResult result;
    if (options && options->method == EVI_FIT_PROFILE) {
      if (kind != evinlier::ModelKind::Fevimm)
        throw std::invalid_argument(
            "profile fitting is available for the fevimm model only");
      if (!options->threshold_grid || options->threshold_grid_len == 0)
        throw std::invalid_argument("profile fitting requires a threshold grid");
      result = evinlier::fit_profile(
          dataset,
          std::span<const double>(options->threshold_grid,
                                  options->threshold_grid_len),
          opts);
    } else {
      result = evinlier::fit_model(dataset, kind, opts);
    }

    auto* handle = new evi_fit();
    handle->result = std::move(result);
    handle->n = dataset.n();
    handle->n_zero = dataset.n_zero();
    handle->ci_alpha =
        options && options->ci_alpha > 0.0 ? options->ci_alpha : 0.05;
    *out = handle;
    if (!handle->result.converged)
      return set_error(EVI_ERR_NONCONVERGENCE,
                       "optimizer did not converge; report still available");
    return EVI_OK;
  });
}

void evi_fit_free(evi_fit* fit) { delete fit; }

evi_status evi_fit_get_params(const evi_fit* fit, evi_params* out) {
  if (!fit || !out)
    return set_error(EVI_ERR_INVALID_ARGUMENT, "null argument");
  *out = from_core(fit->result.theta);
  return EVI_OK;
}

evi_status evi_fit_get_loglik(const evi_fit* fit, double* out) {
  if (!fit || !out)
    return set_error(EVI_ERR_INVALID_ARGUMENT, "null argument");
  *out = fit->result.loglik;
  return EVI_OK;
}

int evi_fit_converged(const evi_fit* fit) {
  return fit && fit->result.converged ? 1 : 0;
}

evi_status evi_fit_report_json(const evi_fit* fit, char** out_json) {
  if (!fit || !out_json)
    return set_error(EVI_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto& r = fit->result;
    json j;
    j["model"] = evinlier::model_name(r.model);
    j["method"] = r.method == evinlier::FitMethod::Profile ? "profile" : "full";
    j["n"] = fit->n;
    j["n_zero"] = fit->n_zero;
    j["estimates"] = params_json(r.theta, r.model);
    j["loglik"] = r.loglik;
    j["naic"] = evinlier::naic(r.loglik, r.parameter_count, fit->n);
    j["parameter_count"] = r.parameter_count;
    j["converged"] = r.converged;
    j["boundary_phi1"] = r.boundary_phi1;
    j["iterations"] = r.iterations;
    if (r.model != evinlier::ModelKind::Fevimm)
      j["zero_floor"] = r.zero_floor;
    if (!r.threshold_grid.empty()) j["threshold_grid"] = r.threshold_grid;

    if (r.model == evinlier::ModelKind::Fevimm && r.converged) {
      try {
        const evinlier::CiReport ci =
            evinlier::asymptotic_ci(r.theta, fit->n, fit->ci_alpha);
        json jci;
        for (std::size_t i = 0; i < ci.labels.size(); ++i) {
          jci[ci.labels[i]] = {{"se", ci.se[i]},
                               {"lower", ci.lower[i]},
                               {"upper", ci.upper[i]}};
        }
        j["asymptotic_ci"] = jci;
        j["ci_alpha"] = ci.alpha;
        j["fisher_regime"] = ci.regime == evinlier::FisherRegime::XiZero
                                 ? "xi_zero"
                                 : "xi_nonzero";
      } catch (const std::exception& e) {
        j["asymptotic_ci_error"] = e.what();
      }
    }
    *out_json = dup_string(j.dump(2));
    return EVI_OK;
  });
}

evi_status evi_gof_json(const double* data, size_t n, evi_model model, int B,
                        uint64_t seed, int threads, char** out_json) {
  if (!data || !out_json || n == 0)
    return set_error(EVI_ERR_INVALID_ARGUMENT, "null or empty data");
  return guarded([&] {
    const evinlier::Dataset dataset(std::vector<double>(data, data + n));
    evinlier::FitOptions opts;
    opts.seed = seed;
    const evinlier::GofReport report = evinlier::gof_bootstrap(
        dataset, to_kind(model), B, seed, opts, threads);
    json j;
    j["model"] = evinlier::model_name(report.fit.model);
    j["B"] = report.B;
    j["n"] = n;
    j["statistics"] = {{"ad", report.observed.ad},
                       {"cvm", report.observed.cvm},
                       {"ks", report.observed.ks}};
    j["clamped"] = report.observed.clamped;
    j["p_values"] = {{"ad", report.p_ad},
                     {"cvm", report.p_cvm},
                     {"ks", report.p_ks}};
    j["naic"] = report.naic;
    j["bootstrap_failures"] = report.n_failed;
    j["estimates"] = params_json(report.fit.theta, report.fit.model);
    j["loglik"] = report.fit.loglik;
    j["converged"] = report.fit.converged;
    *out_json = dup_string(j.dump(2));
    return EVI_OK;
  });
}

namespace {

void fill_curve(const evinlier::DiagnosticCurve& curve,
                const double* requested, size_t m, double* ordinate,
                double* lo, double* hi, int* ok) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  for (size_t i = 0; i < m; ++i) {
    ordinate[i] = nan;
    if (lo) lo[i] = nan;
    if (hi) hi[i] = nan;
    ok[i] = 0;
  }
  std::size_t pos = 0;
  for (size_t i = 0; i < m && pos < curve.abscissa.size(); ++i) {
    if (curve.abscissa[pos] == requested[i]) {
      ordinate[i] = curve.ordinate[pos];
      if (lo && !curve.ci_lower.empty()) lo[i] = curve.ci_lower[pos];
      if (hi && !curve.ci_upper.empty()) hi[i] = curve.ci_upper[pos];
      ok[i] = 1;
      ++pos;
    }
  }
}

}  // namespace

evi_status evi_mean_excess(const double* data, size_t n,
                           const double* thresholds, size_t m,
                           size_t min_exceedances, double* excess_mean,
                           double* ci_lower, double* ci_upper, int* ok) {
  if (!data || !thresholds || !excess_mean || !ok)
    return set_error(EVI_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto curve = evinlier::mean_excess_curve(
        std::span<const double>(data, n),
        std::span<const double>(thresholds, m),
        min_exceedances == 0 ? 5 : min_exceedances);
    fill_curve(curve, thresholds, m, excess_mean, ci_lower, ci_upper, ok);
    return EVI_OK;
  });
}

evi_status evi_stability(const double* data, size_t n,
                         const double* thresholds, size_t m,
                         size_t min_exceedances, double* sigma_star,
                         double* sigma_lo, double* sigma_hi, double* xi,
                         double* xi_lo, double* xi_hi, int* ok) {
  if (!data || !thresholds || !sigma_star || !xi || !ok)
    return set_error(EVI_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto curves = evinlier::stability_curves(
        std::span<const double>(data, n),
        std::span<const double>(thresholds, m),
        min_exceedances == 0 ? 10 : min_exceedances);
    fill_curve(curves.sigma_star, thresholds, m, sigma_star, sigma_lo,
               sigma_hi, ok);
    fill_curve(curves.xi, thresholds, m, xi, xi_lo, xi_hi, ok);
    return EVI_OK;
  });
}

evi_status evi_pickands(const double* data, size_t n, const size_t* k_values,
                        size_t m, double* xi, int* ok) {
  if (!data || !k_values || !xi || !ok)
    return set_error(EVI_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto curve = evinlier::pickands_curve(
        std::span<const double>(data, n),
        std::span<const std::size_t>(k_values, m));
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    std::size_t pos = 0;
    for (size_t i = 0; i < m; ++i) {
      xi[i] = nan;
      ok[i] = 0;
      if (pos < curve.abscissa.size() &&
          curve.abscissa[pos] == static_cast<double>(k_values[i])) {
        xi[i] = curve.ordinate[pos];
        ok[i] = 1;
        ++pos;
      }
    }
    return EVI_OK;
  });
}

evi_status evi_return_levels(const evi_params* params, const double* periods,
                             size_t m, double* levels, int* inside_atom) {
  if (!params || !periods || !levels)
    return set_error(EVI_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const auto curve = evinlier::return_levels(
        to_core(*params), std::span<const double>(periods, m));
    for (size_t i = 0; i < m; ++i) {
      levels[i] = curve.levels[i];
      if (inside_atom) inside_atom[i] = curve.inside_atom[i] ? 1 : 0;
    }
    return EVI_OK;
  });
}

evi_status evi_return_level_bands(const evi_fit* fit, size_t n,
                                  const double* periods, size_t m, int B,
                                  uint64_t seed, int threads, double* lower,
                                  double* upper) {
  if (!fit || !periods || !lower || !upper)
    return set_error(EVI_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    evinlier::ReturnLevelCurve curve;
    if (fit->result.model == evinlier::ModelKind::Fevimm) {
      curve = evinlier::return_levels(fit->result.theta,
                                      std::span<const double>(periods, m));
    } else {
      curve.periods.assign(periods, periods + m);
      curve.levels.assign(m, 0.0);
      curve.inside_atom.assign(m, false);
    }
    evinlier::add_return_level_bands(curve, fit->result,
                                     n == 0 ? fit->n : n, B, seed, {},
                                     threads);
    for (size_t i = 0; i < m; ++i) {
      lower[i] = curve.ci_lower[i];
      upper[i] = curve.ci_upper[i];
    }
    return EVI_OK;
  });
}

evi_status evi_bench_run_file(const char* scenario_path, int threads,
                              char** out_json) {
  if (!scenario_path || !out_json)
    return set_error(EVI_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const evinlier::Scenario scenario =
        evinlier::load_scenario(scenario_path);
    const evinlier::SimReport report =
        evinlier::run_scenario(scenario, threads);

    auto metric_json = [](const std::array<double, 7>& a) {
      json j;
      for (std::size_t i = 0; i < 7; ++i) {
        if (std::isnan(a[i]))
          j[evinlier::kParamNames[i]] = nullptr;
        else
          j[evinlier::kParamNames[i]] = a[i];
      }
      return j;
    };

    json cells = json::array();
    for (const auto& cell : report.cells) {
      json c;
      c["model"] = evinlier::model_name(cell.model);
      c["n"] = cell.n;
      c["phi1_true"] = cell.phi1_true;
      c["true_values"] = metric_json(cell.true_values);
      c["sample_mean"] = metric_json(cell.sample_mean);
      c["bias"] = metric_json(cell.bias);
      c["mse"] = metric_json(cell.mse);
      c["bse"] = metric_json(cell.bse);
      c["bci_lower"] = metric_json(cell.bci_lower);
      c["bci_upper"] = metric_json(cell.bci_upper);
      c["coverage_pct"] = metric_json(cell.coverage_pct);
      c["n_total"] = cell.n_total;
      c["n_converged"] = cell.n_converged;
      c["flagged"] = cell.flagged;
      if (cell.flagged) c["flag_reason"] = cell.flag_reason;
      json est = json::array();
      for (const auto& row : cell.estimates) est.push_back(row);
      c["estimates"] = est;
      cells.push_back(c);
    }

    json j;
    j["scenario"] = {{"name", report.scenario.name},
                     {"replications", report.scenario.replications},
                     {"seed", report.scenario.seed},
                     {"bootstrap_B", report.scenario.bootstrap_B},
                     {"ci_alpha", report.scenario.ci_alpha}};
    j["cells"] = cells;
    *out_json = dup_string(j.dump(2));
    return EVI_OK;
  });
}

evi_status evi_read_csv(const char* path, double** out_values,
                        size_t* out_n) {
  if (!path || !out_values || !out_n)
    return set_error(EVI_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> evi_status {
    std::vector<double> values;
    try {
      values = evinlier::read_csv_column(path);
    } catch (const std::invalid_argument& e) {
      return set_error(EVI_ERR_IO, e.what());
    }
    auto* buf = new double[values.size()];
    std::memcpy(buf, values.data(), values.size() * sizeof(double));
    *out_values = buf;
    *out_n = values.size();
    return EVI_OK;
  });
}

} /* extern "C" */
