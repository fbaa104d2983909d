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

#ifndef EVINLIER_SPECFUN_HPP
#define EVINLIER_SPECFUN_HPP

#include <cstddef>

namespace evinlier {

/// ln Gamma(x) for x > 0, by a Lanczos approximation (g = 7, 9 terms).
/// Throws std::domain_error for x <= 0 or non-finite x.
double log_gamma(double x);

/// Digamma psi(x) = d/dx ln Gamma(x) for x > 0. Upward recurrence to x >= 8
/// followed by the asymptotic expansion; relative error below 1e-12.
double digamma(double x);

/// Trigamma psi'(x) for x > 0, same recurrence/asymptotic scheme.
double trigamma(double x);

/// Regularized lower incomplete gamma P(s, x) = gamma(s, x) / Gamma(s),
/// s > 0, x >= 0. Series expansion for x < s + 1, continued fraction for
/// the complement otherwise.
double reg_lower_inc_gamma(double s, double x);

/// Gamma(shape, scale) distribution functions. gamma_cdf(x) equals
/// reg_lower_inc_gamma(shape, x / scale).
double gamma_cdf(double x, double shape, double scale);
double gamma_pdf(double x, double shape, double scale);
double gamma_log_pdf(double x, double shape, double scale);

/// Inverse of gamma_cdf for p in [0, 1): safeguarded Newton iteration on the
/// CDF with a bracketing bisection fallback. gamma_cdf(gamma_quantile(p))
/// recovers p to ~1e-12.
double gamma_quantile(double p, double shape, double scale);

/// Standard normal CDF and quantile. The quantile uses Acklam's rational
/// approximation polished by one Halley step, good to ~1e-15.
double normal_cdf(double x);
double normal_quantile(double p);

}  // namespace evinlier

#endif  // EVINLIER_SPECFUN_HPP
