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

#ifndef EVINLIER_INFERENCE_HPP
#define EVINLIER_INFERENCE_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "evinlier/estimation.hpp"
#include "evinlier/model.hpp"

namespace evinlier {

enum class FisherRegime { XiNonzero, XiZero };

/// Single-observation Fisher information with the threshold known and fixed
/// at u0. Parameter order follows the asymptotic-normality theorems:
/// (phi1, eta, beta, xi, sigma, phi2) when xi != 0, (phi1, eta, beta, sigma,
/// phi2) when xi = 0. Cross-blocks between the proportion pair, the bulk
/// pair, and the tail pair are exactly zero.
struct FisherMatrix {
  FisherRegime regime = FisherRegime::XiNonzero;
  double u0 = 0.0;
  std::vector<std::string> labels;
  std::vector<double> entries;  // k x k, row-major, symmetric

  std::size_t k() const { return labels.size(); }
  double at(std::size_t i, std::size_t j) const { return entries[i * k() + j]; }
};

/// Builds the information matrix at an interior theta. The proportion block
/// is closed form; the (eta, beta) block uses central finite differences of
/// h(eta, beta) = log G*(u0) at relative step 1e-5 together with the
/// incomplete-gamma ratio; the (xi, sigma) block integrates the standardized
/// GPD expectations by adaptive quadrature. Requires xi in (-0.5, 1); |xi|
/// below the zero cutover selects the 5x5 exponential-tail regime.
FisherMatrix fisher_information(const FevimmParams& theta, double u0);

struct CiReport {
  FisherRegime regime = FisherRegime::XiNonzero;
  double alpha = 0.05;
  std::vector<std::string> labels;
  std::vector<double> estimate;
  std::vector<double> se;     // sqrt([I^-1]_ii / n)
  std::vector<double> lower;
  std::vector<double> upper;
};

/// Wald intervals theta_i +/- z_{alpha/2} sqrt([I^-1]_ii / n). Throws when
/// the information matrix is numerically singular (message carries the
/// regime and condition number).
CiReport asymptotic_ci(const FevimmParams& theta_hat, std::size_t n,
                       double alpha);

inline constexpr std::array<const char*, 7> kParamNames = {
    "phi1", "eta", "beta", "u", "xi", "sigma", "phi2"};

std::array<double, 7> params_to_array(const FevimmParams& theta);
FevimmParams params_from_array(const std::array<double, 7>& a);

struct BootstrapReport {
  int B = 0;
  int n_failed = 0;
  std::vector<std::string> labels;          // the seven parameter names
  std::array<double, 7> se{};               // bootstrap standard errors
  std::array<double, 7> ci_lower{};         // percentile 2.5%
  std::array<double, 7> ci_upper{};         // percentile 97.5%
  std::vector<std::array<double, 7>> estimates;  // converged refits
};

/// Parametric bootstrap around a fitted model: simulate B datasets of size n
/// from the fit, refit each starting at the fitted parameters, and report
/// per-parameter standard deviations and 2.5/97.5 percentile bounds.
/// Deterministic under (seed); replication r uses seed + r. Aborts when more
/// than 20% of refits fail to converge.
BootstrapReport parametric_bootstrap(const FitResult& fit, std::size_t n,
                                     int B, std::uint64_t seed,
                                     const FitOptions& options = {},
                                     int threads = 0);

}  // namespace evinlier

#endif  // EVINLIER_INFERENCE_HPP
