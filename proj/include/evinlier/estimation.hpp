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

#ifndef EVINLIER_ESTIMATION_HPP
#define EVINLIER_ESTIMATION_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evinlier/model.hpp"

namespace evinlier {

/// Nonnegative observations. Values are kept sorted ascending with prefix
/// sums of x and ln x, so likelihood evaluation classifies points against a
/// threshold by binary search; all model likelihoods here are permutation
/// invariant.
class Dataset {
 public:
  explicit Dataset(std::vector<double> values);

  std::size_t n() const { return values_.size(); }
  std::size_t n_zero() const { return n_zero_; }
  const std::vector<double>& sorted() const { return values_; }

  double min_positive() const;  // throws if all values are zero
  double max_value() const { return values_.empty() ? 0.0 : values_.back(); }

  /// Index of the first value >= u (zeros occupy [0, n_zero)).
  std::size_t split_at(double u) const;

  /// Inclusive-exclusive range sums over the sorted values.
  double sum_x(std::size_t first, std::size_t last) const;
  double sum_lnx(std::size_t first, std::size_t last) const;

  /// Linear-interpolation empirical quantile (R type 7).
  double empirical_quantile(double p) const;

 private:
  std::vector<double> values_;
  std::vector<double> prefix_x_;
  std::vector<double> prefix_lnx_;
  std::size_t n_zero_ = 0;
};

enum class ModelKind { Fevimm, Fevmm, Evmm };
enum class FitMethod { Full, Profile };

const char* model_name(ModelKind kind);
ModelKind model_from_name(const std::string& name);
int model_parameter_count(ModelKind kind);

struct FitOptions {
  int max_iterations = 20000;
  double tolerance = 1e-8;
  /// Jittered restarts in addition to the run from the plain initial values.
  int restarts = 3;
  std::uint64_t seed = 0x9d2c5680u;
  /// Workers used for the restart runs (a single run is sequential).
  int threads = 1;
  /// Continuous-bulk models evaluate exact zeros at this floor; <= 0 selects
  /// half the smallest positive observation.
  double zero_floor = 0.0;
  /// Soft bounds for the GPD shape under the fitting transform.
  double xi_lo = -0.5;
  double xi_hi = 1.0;
};

struct FitResult {
  ModelKind model = ModelKind::Fevimm;
  FitMethod method = FitMethod::Full;
  /// Fitted parameters. Baselines leave phi1 = 0; for the EVMM, phi2 holds
  /// the implied tail fraction 1 - H(u).
  FevimmParams theta;
  double loglik = 0.0;
  bool converged = false;
  /// phi1 pinned at the lower transform boundary (no-zeros data).
  bool boundary_phi1 = false;
  int iterations = 0;
  int parameter_count = 7;
  double zero_floor = 0.0;
  std::vector<double> threshold_grid;  // profile fits only

  EvmmParams evmm() const;
};

/// Mixture log-likelihood: sum over the zero / bulk / tail index sets of
/// log phi1, log(1-phi1-phi2) + log f*_G, and log phi2 + log g. Returns
/// -infinity when any observation has zero density under theta.
double log_likelihood(const FevimmParams& theta, const Dataset& data);

/// Baseline log-likelihoods (continuous support); exact zeros contribute the
/// bulk density evaluated at zero_floor.
double fevmm_log_likelihood(const FevimmParams& theta, const Dataset& data,
                            double zero_floor);
double evmm_log_likelihood(const EvmmParams& params, const Dataset& data,
                           double zero_floor);

/// Maximum-likelihood GPD fit to nonnegative excesses; moment-based start
/// refined by Nelder-Mead with xi restricted to (xi_lo, xi_hi).
struct GpdFit {
  double sigma = 1.0;
  double xi = 0.0;
  double loglik = 0.0;
  bool converged = false;
};
GpdFit fit_gpd_excesses(std::span<const double> excesses, double xi_lo = -0.5,
                        double xi_hi = 1.0);

/// Starting values: u at the empirical 90th percentile, phi1/phi2 from
/// empirical proportions, (eta, beta) by method of moments on the bulk,
/// (xi, sigma) by GPD maximum likelihood on the exceedances. Throws
/// std::invalid_argument naming the deficient region when fewer than 10 bulk
/// points or 5 exceedances are available.
FevimmParams initial_values(const Dataset& data);

FitResult fit_full(const Dataset& data,
                   std::optional<FevimmParams> init = std::nullopt,
                   const FitOptions& options = {});
FitResult fit_profile(const Dataset& data,
                      std::span<const double> threshold_grid,
                      const FitOptions& options = {});
FitResult fit_fevmm(const Dataset& data, const FitOptions& options = {});
FitResult fit_evmm(const Dataset& data, const FitOptions& options = {});
FitResult fit_model(const Dataset& data, ModelKind kind,
                    const FitOptions& options = {});
/// Single full fit of `kind` started from the supplied parameters with no
/// jittered restarts (used by bootstrap refits).
FitResult refit_from(const Dataset& data, ModelKind kind,
                     const FevimmParams& start, const FitOptions& options);

/// The fitted model's own CDF (mixture CDF for FEVIMM, the continuous
/// baseline forms otherwise).
double model_cdf(double x, const FitResult& fit);

/// Draws n observations from the fitted model (model-specific inverse CDF).
std::vector<double> sample_fit(const FitResult& fit, std::size_t n,
                               std::uint64_t seed);

double resolve_zero_floor(const Dataset& data, const FitOptions& options);

}  // namespace evinlier

#endif  // EVINLIER_ESTIMATION_HPP
