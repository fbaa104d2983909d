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

#include "evinlier/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "evinlier/nelder_mead.hpp"
#include "evinlier/parallel.hpp"
#include "evinlier/rng.hpp"
#include "evinlier/sampler.hpp"
#include "evinlier/specfun.hpp"

namespace evinlier {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPenalty = 1e15;  // simplex-friendly stand-in for -inf
constexpr double kLogitClamp = 40.0;

double sigmoid(double v) {
  if (v >= 0.0) {
    const double e = std::exp(-v);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(v);
  return e / (1.0 + e);
}

double logit(double s) {
  s = std::clamp(s, 1e-15, 1.0 - 1e-15);
  return std::log(s / (1.0 - s));
}

}  // namespace

Dataset::Dataset(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("Dataset: empty data");
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument(
          "Dataset: observations must be finite and >= 0");
  }
  std::sort(values_.begin(), values_.end());
  n_zero_ = static_cast<std::size_t>(
      std::upper_bound(values_.begin(), values_.end(), 0.0) -
      values_.begin());
  prefix_x_.resize(values_.size() + 1, 0.0);
  prefix_lnx_.resize(values_.size() + 1, 0.0);
  for (std::size_t i = 0; i < values_.size(); ++i) {
    prefix_x_[i + 1] = prefix_x_[i] + values_[i];
    prefix_lnx_[i + 1] =
        prefix_lnx_[i] + (values_[i] > 0.0 ? std::log(values_[i]) : 0.0);
  }
}

double Dataset::min_positive() const {
  if (n_zero_ >= values_.size())
    throw std::invalid_argument("Dataset: no positive observations");
  return values_[n_zero_];
}

std::size_t Dataset::split_at(double u) const {
  return static_cast<std::size_t>(
      std::lower_bound(values_.begin(), values_.end(), u) - values_.begin());
}

double Dataset::sum_x(std::size_t first, std::size_t last) const {
  return prefix_x_[last] - prefix_x_[first];
}

double Dataset::sum_lnx(std::size_t first, std::size_t last) const {
  return prefix_lnx_[last] - prefix_lnx_[first];
}

double Dataset::empirical_quantile(double p) const {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("empirical_quantile: p must lie in [0, 1]");
  const std::size_t n = values_.size();
  const double h = (static_cast<double>(n) - 1.0) * p;
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= n) return values_.back();
  return values_[lo] + (h - static_cast<double>(lo)) *
                           (values_[lo + 1] - values_[lo]);
}

const char* model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Fevimm: return "fevimm";
    case ModelKind::Fevmm: return "fevmm";
    case ModelKind::Evmm: return "evmm";
  }
  return "unknown";
}

ModelKind model_from_name(const std::string& name) {
  if (name == "fevimm") return ModelKind::Fevimm;
  if (name == "fevmm") return ModelKind::Fevmm;
  if (name == "evmm") return ModelKind::Evmm;
  throw std::invalid_argument("unknown model name: " + name);
}

int model_parameter_count(ModelKind kind) {
  switch (kind) {
    case ModelKind::Fevimm: return 7;
    case ModelKind::Fevmm: return 6;
    case ModelKind::Evmm: return 5;
  }
  return 0;
}

EvmmParams FitResult::evmm() const {
  return {theta.eta, theta.beta, theta.u, theta.sigma, theta.xi};
}

// ---------------------------------------------------------------------------
// Likelihoods
// ---------------------------------------------------------------------------

namespace {

// Shared tail term: sum of GPD log densities over sorted[first, n).
double tail_log_density_sum(const Dataset& data, std::size_t first, double u,
                            double sigma, double xi) {
  const auto& x = data.sorted();
  const std::size_t n = x.size();
  const std::size_t m = n - first;
  if (m == 0) return 0.0;
  const double log_sigma = std::log(sigma);
  if (std::abs(xi) < kXiZeroTol) {
    return -static_cast<double>(m) * log_sigma -
           (data.sum_x(first, n) - static_cast<double>(m) * u) / sigma;
  }
  const double coef = 1.0 / xi + 1.0;
  double acc = 0.0;
  for (std::size_t i = first; i < n; ++i) {
    const double w = xi * (x[i] - u) / sigma;
    if (w <= -1.0) return -kInf;  // outside the bounded support
    acc += std::log1p(w);
  }
  return -static_cast<double>(m) * log_sigma - coef * acc;
}

double fevimm_loglik_raw(const FevimmParams& t, const Dataset& data) {
  const std::size_t n = data.n();
  const std::size_t n1 = data.n_zero();
  const std::size_t split = std::max(data.split_at(t.u), n1);
  const std::size_t n2 = split - n1;
  const std::size_t n3 = n - split;

  double ll = 0.0;
  if (n1 > 0) ll += static_cast<double>(n1) * std::log(t.phi1);
  if (n2 > 0) {
    const double bulk_norm = reg_lower_inc_gamma(t.eta, t.u / t.beta);
    if (!(bulk_norm > 0.0)) return -kInf;
    const double per_point = std::log(1.0 - t.phi1 - t.phi2) -
                             std::log(bulk_norm) -
                             t.eta * std::log(t.beta) - log_gamma(t.eta);
    ll += static_cast<double>(n2) * per_point +
          (t.eta - 1.0) * data.sum_lnx(n1, split) -
          data.sum_x(n1, split) / t.beta;
  }
  if (n3 > 0) {
    const double tail =
        tail_log_density_sum(data, split, t.u, t.sigma, t.xi);
    if (tail == -kInf) return -kInf;
    ll += static_cast<double>(n3) * std::log(t.phi2) + tail;
  }
  return std::isfinite(ll) ? ll : -kInf;
}

double fevmm_loglik_raw(const FevimmParams& t, const Dataset& data,
                        double floor) {
  const std::size_t n = data.n();
  const std::size_t n1 = data.n_zero();
  const std::size_t split = std::max(data.split_at(t.u), n1);
  const std::size_t n2 = split - n1;
  const std::size_t n3 = n - split;
  const std::size_t n_bulk = n1 + n2;

  double ll = 0.0;
  if (n_bulk > 0) {
    const double bulk_norm = reg_lower_inc_gamma(t.eta, t.u / t.beta);
    if (!(bulk_norm > 0.0)) return -kInf;
    const double per_point = std::log1p(-t.phi2) - std::log(bulk_norm) -
                             t.eta * std::log(t.beta) - log_gamma(t.eta);
    double s_lnx = data.sum_lnx(n1, split);
    double s_x = data.sum_x(n1, split);
    if (n1 > 0) {  // zeros sit at the floor inside the bulk component
      s_lnx += static_cast<double>(n1) * std::log(floor);
      s_x += static_cast<double>(n1) * floor;
    }
    ll += static_cast<double>(n_bulk) * per_point +
          (t.eta - 1.0) * s_lnx - s_x / t.beta;
  }
  if (n3 > 0) {
    const double tail =
        tail_log_density_sum(data, split, t.u, t.sigma, t.xi);
    if (tail == -kInf) return -kInf;
    ll += static_cast<double>(n3) * std::log(t.phi2) + tail;
  }
  return std::isfinite(ll) ? ll : -kInf;
}

double evmm_loglik_raw(const EvmmParams& t, const Dataset& data,
                       double floor) {
  const std::size_t n = data.n();
  const std::size_t n1 = data.n_zero();
  const std::size_t split = std::max(data.split_at(t.u), n1);
  const std::size_t n2 = split - n1;
  const std::size_t n3 = n - split;
  const std::size_t n_bulk = n1 + n2;

  double ll = 0.0;
  if (n_bulk > 0) {
    const double per_point =
        -t.eta * std::log(t.beta) - log_gamma(t.eta);
    double s_lnx = data.sum_lnx(n1, split);
    double s_x = data.sum_x(n1, split);
    if (n1 > 0) {
      s_lnx += static_cast<double>(n1) * std::log(floor);
      s_x += static_cast<double>(n1) * floor;
    }
    ll += static_cast<double>(n_bulk) * per_point +
          (t.eta - 1.0) * s_lnx - s_x / t.beta;
  }
  if (n3 > 0) {
    const double h_u = reg_lower_inc_gamma(t.eta, t.u / t.beta);
    if (!(h_u < 1.0)) return -kInf;
    const double tail =
        tail_log_density_sum(data, split, t.u, t.sigma, t.xi);
    if (tail == -kInf) return -kInf;
    ll += static_cast<double>(n3) * std::log1p(-h_u) + tail;
  }
  return std::isfinite(ll) ? ll : -kInf;
}

}  // namespace

double log_likelihood(const FevimmParams& theta, const Dataset& data) {
  theta.validate();
  if (data.n() == 0) throw std::invalid_argument("log_likelihood: empty data");
  return fevimm_loglik_raw(theta, data);
}

double fevmm_log_likelihood(const FevimmParams& theta, const Dataset& data,
                            double zero_floor) {
  if (!(theta.phi2 > 0.0 && theta.phi2 < 1.0))
    throw std::domain_error("fevmm_log_likelihood: phi2 must be in (0, 1)");
  if (data.n_zero() > 0 && !(zero_floor > 0.0))
    throw std::domain_error("fevmm_log_likelihood: zero_floor must be > 0");
  return fevmm_loglik_raw(theta, data, zero_floor);
}

double evmm_log_likelihood(const EvmmParams& params, const Dataset& data,
                           double zero_floor) {
  params.validate();
  if (data.n_zero() > 0 && !(zero_floor > 0.0))
    throw std::domain_error("evmm_log_likelihood: zero_floor must be > 0");
  return evmm_loglik_raw(params, data, zero_floor);
}

double resolve_zero_floor(const Dataset& data, const FitOptions& options) {
  if (options.zero_floor > 0.0) return options.zero_floor;
  if (data.n_zero() == 0) return 1e-8;
  return 0.5 * data.min_positive();
}

// ---------------------------------------------------------------------------
// GPD fit (exceedances)
// ---------------------------------------------------------------------------

GpdFit fit_gpd_excesses(std::span<const double> excesses, double xi_lo,
                        double xi_hi) {
  GpdFit fit;
  const std::size_t m = excesses.size();
  if (m < 2) return fit;

  double mean = 0.0;
  for (double y : excesses) {
    if (!(y >= 0.0)) throw std::invalid_argument(
        "fit_gpd_excesses: excesses must be >= 0");
    mean += y;
  }
  mean /= static_cast<double>(m);
  double var = 0.0;
  for (double y : excesses) var += (y - mean) * (y - mean);
  var /= static_cast<double>(m - 1);
  if (!(mean > 0.0) || !(var > 0.0)) return fit;

  const double cv2 = mean * mean / var;
  double xi0 = std::clamp(0.5 * (1.0 - cv2), xi_lo + 0.02, xi_hi - 0.1);
  double sigma0 = std::max(0.5 * mean * (cv2 + 1.0), 1e-10);

  auto nll = [&](std::span<const double> t) {
    const double sigma = std::exp(t[0]);
    const double xi = xi_lo + (xi_hi - xi_lo) * sigmoid(t[1]);
    double acc = static_cast<double>(m) * std::log(sigma);
    if (std::abs(xi) < kXiZeroTol) {
      for (double y : excesses) acc += y / sigma;
      return acc;
    }
    const double coef = 1.0 / xi + 1.0;
    for (double y : excesses) {
      const double w = xi * y / sigma;
      if (w <= -1.0) return kPenalty;
      acc += coef * std::log1p(w);
    }
    return std::isfinite(acc) ? acc : kPenalty;
  };

  const double t0[2] = {std::log(sigma0),
                        logit((xi0 - xi_lo) / (xi_hi - xi_lo))};
  NelderMeadOptions nm;
  nm.max_iterations = 2000;
  nm.tolerance = 1e-10;
  const auto res = nelder_mead_minimize(nll, t0, nm);

  fit.sigma = std::exp(res.x[0]);
  fit.xi = xi_lo + (xi_hi - xi_lo) * sigmoid(res.x[1]);
  fit.loglik = -res.value;
  fit.converged = res.converged && res.value < kPenalty;
  return fit;
}

// ---------------------------------------------------------------------------
// Initial values
// ---------------------------------------------------------------------------

FevimmParams initial_values(const Dataset& data) {
  const std::size_t n = data.n();
  const double u0 = data.empirical_quantile(0.90);

  const std::size_t n1 = data.n_zero();
  const std::size_t split = std::max(data.split_at(u0), n1);
  const std::size_t n_bulk = split - n1;
  const std::size_t n_tail = n - split;
  if (n_bulk < 10)
    throw std::invalid_argument(
        "initial_values: fewer than 10 positive bulk observations below the "
        "90th percentile");
  if (n_tail < 5)
    throw std::invalid_argument(
        "initial_values: fewer than 5 exceedances at the 90th percentile");

  FevimmParams init;
  init.u = u0;
  init.phi1 = n1 > 0 ? static_cast<double>(n1) / static_cast<double>(n)
                     : 0.5 / static_cast<double>(n);
  init.phi2 = static_cast<double>(n_tail) / static_cast<double>(n);
  if (init.phi1 + init.phi2 >= 1.0) init.phi1 = 1.0 - init.phi2 - 1e-6;

  // Method of moments on the bulk.
  const double mean = data.sum_x(n1, split) / static_cast<double>(n_bulk);
  double var = 0.0;
  for (std::size_t i = n1; i < split; ++i) {
    const double d = data.sorted()[i] - mean;
    var += d * d;
  }
  var /= static_cast<double>(n_bulk - 1);
  if (var > 0.0 && mean > 0.0) {
    init.eta = mean * mean / var;
    init.beta = var / mean;
  } else {
    init.eta = 1.0;
    init.beta = std::max(mean, 1e-6);
  }

  std::vector<double> excesses;
  excesses.reserve(n_tail);
  for (std::size_t i = split; i < n; ++i)
    excesses.push_back(data.sorted()[i] - u0);
  const GpdFit tail = fit_gpd_excesses(excesses);
  init.xi = tail.xi;
  init.sigma = tail.sigma > 0.0 ? tail.sigma : 1.0;
  return init;
}

// ---------------------------------------------------------------------------
// Parameter transforms
// ---------------------------------------------------------------------------

namespace {

// Unconstrained coordinates for the simplex search. Probabilities use an
// additive-log-ratio pair (the unit-sum constraint is structural), positive
// parameters a log scale, u a logistic map over the log data range, and xi
// a logistic map onto (xi_lo, xi_hi).
struct Transform {
  ModelKind kind = ModelKind::Fevimm;
  double ln_u_lo = 0.0;
  double ln_u_hi = 1.0;
  double xi_lo = -0.5;
  double xi_hi = 1.0;
  bool fixed_u = false;
  double u_fixed = 0.0;

  std::size_t dim() const {
    std::size_t d = kind == ModelKind::Fevimm ? 7
                    : kind == ModelKind::Fevmm ? 6
                                               : 5;
    return fixed_u ? d - 1 : d;
  }

  double map_u(double v) const {
    return std::exp(ln_u_lo + (ln_u_hi - ln_u_lo) * sigmoid(v));
  }
  double unmap_u(double u) const {
    const double r = (std::log(u) - ln_u_lo) / (ln_u_hi - ln_u_lo);
    return std::clamp(logit(r), -kLogitClamp, kLogitClamp);
  }
  double map_xi(double v) const { return xi_lo + (xi_hi - xi_lo) * sigmoid(v); }
  double unmap_xi(double xi) const {
    const double r = (xi - xi_lo) / (xi_hi - xi_lo);
    return std::clamp(logit(r), -kLogitClamp, kLogitClamp);
  }

  FevimmParams to_natural(std::span<const double> t) const {
    FevimmParams p;
    std::size_t i = 0;
    if (kind == ModelKind::Fevimm) {
      const double a1 = std::clamp(t[i++], -kLogitClamp, kLogitClamp);
      const double a2 = std::clamp(t[i++], -kLogitClamp, kLogitClamp);
      const double m = std::max({0.0, a1, a2});
      const double den =
          std::exp(-m) + std::exp(a1 - m) + std::exp(a2 - m);
      p.phi1 = std::exp(a1 - m) / den;
      p.phi2 = std::exp(a2 - m) / den;
    } else if (kind == ModelKind::Fevmm) {
      p.phi1 = 0.0;
      p.phi2 = sigmoid(std::clamp(t[i++], -kLogitClamp, kLogitClamp));
    } else {
      p.phi1 = 0.0;
      p.phi2 = 0.0;
    }
    p.eta = std::exp(std::clamp(t[i++], -kLogitClamp, kLogitClamp));
    p.beta = std::exp(std::clamp(t[i++], -700.0, 700.0));
    p.u = fixed_u ? u_fixed : map_u(t[i++]);
    p.xi = map_xi(t[i++]);
    p.sigma = std::exp(std::clamp(t[i++], -700.0, 700.0));
    return p;
  }

  std::vector<double> from_natural(const FevimmParams& p) const {
    std::vector<double> t;
    t.reserve(dim());
    if (kind == ModelKind::Fevimm) {
      const double rest = std::max(1.0 - p.phi1 - p.phi2, 1e-15);
      t.push_back(std::clamp(std::log(std::max(p.phi1, 1e-15) / rest),
                             -kLogitClamp, kLogitClamp));
      t.push_back(std::clamp(std::log(std::max(p.phi2, 1e-15) / rest),
                             -kLogitClamp, kLogitClamp));
    } else if (kind == ModelKind::Fevmm) {
      t.push_back(std::clamp(logit(p.phi2), -kLogitClamp, kLogitClamp));
    }
    t.push_back(std::log(p.eta));
    t.push_back(std::log(p.beta));
    if (!fixed_u) t.push_back(unmap_u(p.u));
    t.push_back(unmap_xi(p.xi));
    t.push_back(std::log(p.sigma));
    return t;
  }
};

double model_loglik(ModelKind kind, const FevimmParams& theta,
                    const Dataset& data, double floor) {
  switch (kind) {
    case ModelKind::Fevimm: return fevimm_loglik_raw(theta, data);
    case ModelKind::Fevmm: return fevmm_loglik_raw(theta, data, floor);
    case ModelKind::Evmm: {
      const EvmmParams e{theta.eta, theta.beta, theta.u, theta.sigma,
                         theta.xi};
      return evmm_loglik_raw(e, data, floor);
    }
  }
  return -kInf;
}

struct SingleRun {
  NelderMeadResult nm;
};

FevimmParams jitter_start(const FevimmParams& init, const Transform& tr,
                          Xoshiro256pp& rng) {
  auto noise = [&]() { return 1.0 + 0.1 * (2.0 * rng.uniform_open01() - 1.0); };
  FevimmParams p = init;
  p.phi1 *= noise();
  p.phi2 *= noise();
  if (p.phi1 + p.phi2 >= 0.999) {
    const double scale = 0.999 / (p.phi1 + p.phi2);
    p.phi1 *= scale;
    p.phi2 *= scale;
  }
  p.eta *= noise();
  p.beta *= noise();
  p.sigma *= noise();
  p.xi *= noise();
  p.xi = std::clamp(p.xi, tr.xi_lo + 1e-3, tr.xi_hi - 1e-3);
  if (!tr.fixed_u) {
    p.u *= noise();
    const double lo = std::exp(tr.ln_u_lo), hi = std::exp(tr.ln_u_hi);
    p.u = std::clamp(p.u, lo * (1.0 + 1e-9), hi * (1.0 - 1e-9));
  }
  return p;
}

FitResult run_fit(ModelKind kind, const Dataset& data,
                  const FevimmParams& init, const Transform& tr,
                  const FitOptions& options, double floor) {
  auto objective = [&](std::span<const double> t) {
    const FevimmParams theta = tr.to_natural(t);
    const double ll = model_loglik(kind, theta, data, floor);
    return std::isfinite(ll) ? -ll : kPenalty;
  };

  const int n_runs = 1 + std::max(0, options.restarts);
  std::vector<SingleRun> runs(static_cast<std::size_t>(n_runs));

  // Per-run starts derived up front so results do not depend on scheduling.
  std::vector<FevimmParams> starts;
  starts.reserve(static_cast<std::size_t>(n_runs));
  starts.push_back(init);
  for (int r = 1; r < n_runs; ++r) {
    Xoshiro256pp rng(options.seed + static_cast<std::uint64_t>(r));
    starts.push_back(jitter_start(init, tr, rng));
  }

  NelderMeadOptions nm;
  nm.max_iterations = options.max_iterations;
  nm.tolerance = options.tolerance;

  parallel_for(static_cast<std::size_t>(n_runs), options.threads,
               [&](std::size_t r) {
                 const auto t0 = tr.from_natural(starts[r]);
                 runs[r].nm = nelder_mead_minimize(objective, t0, nm);
               });

  // Best objective; ties broken by iteration count, then lexicographically.
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    const auto& a = runs[r].nm;
    const auto& b = runs[best].nm;
    if (a.value < b.value ||
        (a.value == b.value &&
         (a.iterations < b.iterations ||
          (a.iterations == b.iterations && a.x < b.x))))
      best = r;
  }

  const auto& win = runs[best].nm;
  FitResult result;
  result.model = kind;
  result.theta = tr.to_natural(win.x);
  if (kind == ModelKind::Evmm) {
    // Implied tail fraction for reporting.
    result.theta.phi2 =
        1.0 - gamma_cdf(result.theta.u, result.theta.eta, result.theta.beta);
  }
  result.loglik = win.value >= kPenalty ? -kInf : -win.value;
  result.converged = win.converged && win.value < kPenalty;
  result.boundary_phi1 =
      kind == ModelKind::Fevimm && result.theta.phi1 < 1e-9;
  result.iterations = win.iterations;
  result.parameter_count = model_parameter_count(kind);
  result.zero_floor = kind == ModelKind::Fevimm ? 0.0 : floor;
  return result;
}

Transform make_transform(ModelKind kind, const Dataset& data,
                         const FitOptions& options) {
  Transform tr;
  tr.kind = kind;
  tr.xi_lo = options.xi_lo;
  tr.xi_hi = options.xi_hi;
  const double lo = data.min_positive();
  const double hi = data.max_value();
  if (!(hi > lo))
    throw std::invalid_argument("fit: degenerate data range for threshold");
  tr.ln_u_lo = std::log(lo);
  tr.ln_u_hi = std::log(hi);
  return tr;
}

FevimmParams clamp_into(const FevimmParams& init, const Transform& tr) {
  FevimmParams p = init;
  const double lo = std::exp(tr.ln_u_lo), hi = std::exp(tr.ln_u_hi);
  p.u = std::clamp(p.u, lo * (1.0 + 1e-9), hi * (1.0 - 1e-9));
  p.xi = std::clamp(p.xi, tr.xi_lo + 1e-6, tr.xi_hi - 1e-6);
  return p;
}

}  // namespace

FitResult fit_full(const Dataset& data, std::optional<FevimmParams> init,
                   const FitOptions& options) {
  if (data.n_zero() == data.n())
    throw std::invalid_argument("fit_full: all observations are zero");
  const Transform tr = make_transform(ModelKind::Fevimm, data, options);
  const FevimmParams start =
      clamp_into(init ? *init : initial_values(data), tr);
  return run_fit(ModelKind::Fevimm, data, start, tr, options, 0.0);
}

FitResult fit_profile(const Dataset& data,
                      std::span<const double> threshold_grid,
                      const FitOptions& options) {
  if (threshold_grid.empty())
    throw std::invalid_argument("fit_profile: empty threshold grid");
  if (data.n_zero() == data.n())
    throw std::invalid_argument("fit_profile: all observations are zero");

  const double lo = data.min_positive();
  const double hi = data.max_value();
  for (double u : threshold_grid) {
    if (!(u > lo && u < hi))
      throw std::invalid_argument(
          "fit_profile: grid threshold outside the open data range");
    if (data.n() - data.split_at(u) < 5)
      throw std::invalid_argument(
          "fit_profile: fewer than 5 exceedances at a grid threshold");
  }

  std::vector<FitResult> fits(threshold_grid.size());
  FitOptions per_point = options;
  per_point.threads = 1;
  parallel_for(threshold_grid.size(), options.threads, [&](std::size_t i) {
    Transform tr = make_transform(ModelKind::Fevimm, data, per_point);
    tr.fixed_u = true;
    tr.u_fixed = threshold_grid[i];
    FevimmParams init = initial_values(data);
    init.u = threshold_grid[i];
    init.phi2 = std::max(
        static_cast<double>(data.n() - data.split_at(threshold_grid[i])) /
            static_cast<double>(data.n()),
        1e-4);
    if (init.phi1 + init.phi2 >= 1.0) init.phi1 = 1.0 - init.phi2 - 1e-6;
    fits[i] =
        run_fit(ModelKind::Fevimm, data, clamp_into(init, tr), tr, per_point,
                0.0);
    fits[i].theta.u = threshold_grid[i];
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < fits.size(); ++i)
    if (fits[i].loglik > fits[best].loglik) best = i;

  FitResult result = fits[best];
  result.method = FitMethod::Profile;
  result.threshold_grid.assign(threshold_grid.begin(), threshold_grid.end());
  return result;
}

FitResult fit_fevmm(const Dataset& data, const FitOptions& options) {
  if (data.n_zero() == data.n())
    throw std::invalid_argument("fit_fevmm: all observations are zero");
  const Transform tr = make_transform(ModelKind::Fevmm, data, options);
  FevimmParams init = initial_values(data);
  init.phi1 = 0.0;
  const double floor = resolve_zero_floor(data, options);
  return run_fit(ModelKind::Fevmm, data, clamp_into(init, tr), tr, options,
                 floor);
}

FitResult fit_evmm(const Dataset& data, const FitOptions& options) {
  if (data.n_zero() == data.n())
    throw std::invalid_argument("fit_evmm: all observations are zero");
  const Transform tr = make_transform(ModelKind::Evmm, data, options);
  FevimmParams init = initial_values(data);
  init.phi1 = 0.0;
  const double floor = resolve_zero_floor(data, options);
  return run_fit(ModelKind::Evmm, data, clamp_into(init, tr), tr, options,
                 floor);
}

FitResult fit_model(const Dataset& data, ModelKind kind,
                    const FitOptions& options) {
  switch (kind) {
    case ModelKind::Fevimm: return fit_full(data, std::nullopt, options);
    case ModelKind::Fevmm: return fit_fevmm(data, options);
    case ModelKind::Evmm: return fit_evmm(data, options);
  }
  throw std::invalid_argument("fit_model: unknown model");
}

FitResult refit_from(const Dataset& data, ModelKind kind,
                     const FevimmParams& start, const FitOptions& options) {
  FitOptions opts = options;
  opts.restarts = 0;
  opts.threads = 1;
  const Transform tr = make_transform(kind, data, opts);
  const double floor =
      kind == ModelKind::Fevimm ? 0.0 : resolve_zero_floor(data, opts);
  return run_fit(kind, data, clamp_into(start, tr), tr, opts, floor);
}

double model_cdf(double x, const FitResult& fit) {
  switch (fit.model) {
    case ModelKind::Fevimm: return cdf(x, fit.theta);
    case ModelKind::Fevmm: return fevmm_cdf(x, fit.theta);
    case ModelKind::Evmm: return evmm_cdf(x, fit.evmm());
  }
  return 0.0;
}

std::vector<double> sample_fit(const FitResult& fit, std::size_t n,
                               std::uint64_t seed) {
  switch (fit.model) {
    case ModelKind::Fevimm: return sample({n, fit.theta, seed});
    case ModelKind::Fevmm: return sample_fevmm(fit.theta, n, seed);
    case ModelKind::Evmm: return sample_evmm(fit.evmm(), n, seed);
  }
  return {};
}

}  // namespace evinlier
