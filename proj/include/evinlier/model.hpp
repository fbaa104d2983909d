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

#ifndef EVINLIER_MODEL_HPP
#define EVINLIER_MODEL_HPP

#include <optional>

namespace evinlier {

/// GPD shape values with |xi| below this are evaluated on the exponential
/// branch. Derivative-based code (Fisher information, likelihoods) uses the
/// same cutover.
inline constexpr double kXiZeroTol = 1e-9;

/// Generalized Pareto distribution over [u, inf) for xi >= 0, or
/// [u, u - sigma/xi] for xi < 0.
struct GpdParams {
  double u = 0.0;
  double sigma = 1.0;
  double xi = 0.0;

  void validate() const;  // throws std::domain_error
  /// Finite upper endpoint for xi < 0, +inf otherwise.
  double support_upper() const;
};

double gpd_pdf(double x, const GpdParams& g);
double gpd_log_pdf(double x, const GpdParams& g);
double gpd_cdf(double x, const GpdParams& g);
/// p in [0, 1]; p = 1 is allowed only for xi < 0 (finite endpoint).
double gpd_quantile(double p, const GpdParams& g);

/// Mixture with a point mass at zero, a gamma bulk truncated to (0, u), and
/// a GPD tail above u with explicit tail fraction phi2.
struct FevimmParams {
  double phi1 = 0.1;   // probability mass at zero
  double eta = 1.0;    // gamma shape
  double beta = 1.0;   // gamma scale
  double u = 1.0;      // threshold
  double xi = 0.0;     // GPD shape
  double sigma = 1.0;  // GPD scale
  double phi2 = 0.1;   // tail fraction

  void validate() const;  // throws std::domain_error
  bool is_valid() const noexcept;
  GpdParams tail() const { return {u, sigma, xi}; }
};

/// Gamma bulk with a GPD tail spliced at u; tail fraction implied by the
/// bulk CDF mass above u.
struct EvmmParams {
  double eta = 1.0;
  double beta = 1.0;
  double u = 1.0;
  double sigma = 1.0;
  double xi = 0.0;

  void validate() const;
  GpdParams tail() const { return {u, sigma, xi}; }
};

/// Density of the mixture. At exactly x = 0 this returns the atom mass phi1
/// rather than a density value (the convention used throughout: the zero
/// component is a point mass, everything else is Lebesgue density).
double pdf(double x, const FevimmParams& theta);

/// Right-continuous CDF: 0 for x < 0, phi1 at x = 0, 1 - phi2 at x = u.
double cdf(double x, const FevimmParams& theta);

/// Lower-quantile inverse, q_p = inf{x : F(x) >= p}. p = 1 is accepted only
/// when the tail has a finite endpoint (xi < 0).
double quantile(double p, const FevimmParams& theta);

/// GPD scale that makes the density continuous at u,
/// sigma = phi2/(1 - phi1 - phi2) * G*(u)/g*(u). theta.sigma is ignored.
double continuity_sigma(const FevimmParams& theta);

/// GPD scale that makes the density differentiable at u for the gamma bulk,
/// sigma = (1 + xi) / (1/beta - (eta - 1)/u). Returns nullopt when the
/// matching scale is nonpositive; throws when the denominator vanishes
/// (no differentiable matching exists). theta.sigma is ignored.
std::optional<double> differentiability_sigma(const FevimmParams& theta);

/// VaR_p, an alias of quantile.
double value_at_risk(double p, const FevimmParams& theta);

/// TVaR_p = E[X | X > VaR_p]-style tail integral (1/(1-p)) * int_{VaR_p} x f.
/// Bulk contribution by adaptive quadrature, GPD contribution in closed form.
/// Requires xi < 1 (finite tail mean).
double tail_value_at_risk(double p, const FevimmParams& theta);

/// phi2 * (1 - G(x | u, sigma, xi)) for x >= u.
double unconditional_survival(double x, const FevimmParams& theta);

/// Baseline CDFs. fevmm_cdf is the mixture CDF with the atom removed
/// (phi1 treated as exactly 0); theta.phi1 is ignored.
double evmm_cdf(double x, const EvmmParams& params);
double fevmm_cdf(double x, const FevimmParams& theta);

double evmm_quantile(double p, const EvmmParams& params);
double fevmm_quantile(double p, const FevimmParams& theta);

}  // namespace evinlier

#endif  // EVINLIER_MODEL_HPP
