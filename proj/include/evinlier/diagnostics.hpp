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

#ifndef EVINLIER_DIAGNOSTICS_HPP
#define EVINLIER_DIAGNOSTICS_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "evinlier/estimation.hpp"
#include "evinlier/model.hpp"

namespace evinlier {

struct GofStatistics {
  double ad = 0.0;   // Anderson-Darling A^2
  double cvm = 0.0;  // Cramer-von Mises W^2
  double ks = 0.0;   // Kolmogorov-Smirnov D
  /// Set when any F(x_i) had to be clamped away from {0, 1} for the AD logs.
  bool clamped = false;
};

/// Classical EDF statistics of the data against a fitted CDF evaluator. The
/// mixed-CDF convention applies: F is evaluated right-continuously, so ties
/// at the zero atom see F(0) = phi1. With an atom the null distributions are
/// not the classical ones; calibrate via the parametric bootstrap.
GofStatistics gof_statistics(const Dataset& data,
                             const std::function<double(double)>& fitted_cdf);

/// Normalized AIC, (-2 loglik + 2k) / n.
double naic(double loglik, int k, std::size_t n);

struct GofReport {
  GofStatistics observed;
  double p_ad = 0.0;
  double p_cvm = 0.0;
  double p_ks = 0.0;
  double naic = 0.0;
  int B = 0;
  int n_failed = 0;
  FitResult fit;
};

/// Fits `kind` to the data, then simulates B datasets from the fitted model,
/// refits each, and recomputes the statistics; p = (1 + #{boot >= obs}) /
/// (B + 1). Deterministic under the seed and invariant to worker count.
/// Aborts when more than 20% of refits fail.
GofReport gof_bootstrap(const Dataset& data, ModelKind kind, int B,
                        std::uint64_t seed, const FitOptions& options = {},
                        int threads = 0);

/// Same protocol applied to an externally supplied fit procedure: `fit_stats`
/// maps a dataset to the three statistics under the procedure's own refit
/// (or empty optional on failure), `simulate` draws a replicate dataset.
struct PValues {
  double ad = 0.0, cvm = 0.0, ks = 0.0;
  int n_failed = 0;
};
PValues bootstrap_pvalue(
    const GofStatistics& observed,
    const std::function<std::vector<double>(std::uint64_t)>& simulate,
    const std::function<std::optional<GofStatistics>(const Dataset&)>&
        fit_stats,
    int B, std::uint64_t seed, int threads = 0);

struct DiagnosticCurve {
  std::string kind;  // mean_excess | stability_sigma | stability_xi | pickands
  std::vector<double> abscissa;
  std::vector<double> ordinate;
  std::vector<double> ci_lower;  // empty when no bands were requested
  std::vector<double> ci_upper;
  /// Abscissa values skipped (insufficient exceedances, failed fit, or a
  /// degenerate spacing ratio).
  std::vector<double> omitted;
};

/// Mean excess e(t) = mean of (x - t) over x > t, with normal-approximation
/// pointwise bands. Thresholds keeping fewer than min_exceedances points are
/// omitted and flagged.
DiagnosticCurve mean_excess_curve(std::span<const double> data,
                                  std::span<const double> thresholds,
                                  std::size_t min_exceedances = 5);

struct StabilityCurves {
  DiagnosticCurve sigma_star;  // modified scale sigma(t) - xi(t) * t
  DiagnosticCurve xi;
};

/// GPD parameter-stability curves: for each threshold fit the GPD to the
/// excesses and report xi(t) and the reparameterized scale
/// sigma*(t) = sigma(t) - xi(t) t, with delta-method pointwise bands.
StabilityCurves stability_curves(std::span<const double> data,
                                 std::span<const double> thresholds,
                                 std::size_t min_exceedances = 10);

/// Pickands tail-index estimates over k values (requires 4k <= n):
/// xi(k) = ln[(X(n-k+1) - X(n-2k+1)) / (X(n-2k+1) - X(n-4k+1))] / ln 2
/// in terms of ascending order statistics. Degenerate spacings are omitted.
DiagnosticCurve pickands_curve(std::span<const double> data,
                               std::span<const std::size_t> k_values);

struct ReturnLevelCurve {
  std::vector<double> periods;
  std::vector<double> levels;
  std::vector<double> ci_lower;  // empty without bands
  std::vector<double> ci_upper;
  /// Marks periods whose exceedance probability falls inside the zero atom
  /// (level reported as 0).
  std::vector<bool> inside_atom;
};

/// level(T) = quantile(1 - 1/T); one observation is one return-period unit.
ReturnLevelCurve return_levels(const FevimmParams& theta,
                               std::span<const double> periods);

/// Percentile bootstrap bands: simulate from the fit, refit, recompute the
/// levels, and take the 2.5/97.5 percentiles per period.
void add_return_level_bands(ReturnLevelCurve& curve, const FitResult& fit,
                            std::size_t n, int B, std::uint64_t seed,
                            const FitOptions& options = {}, int threads = 0);

}  // namespace evinlier

#endif  // EVINLIER_DIAGNOSTICS_HPP
