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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "evinlier/specfun.hpp"
#include "test_oracles.hpp"

using namespace evinlier;

TEST_CASE("log_gamma at exact and reference points") {
  CHECK(std::abs(log_gamma(1.0)) < 1e-12);                    // Gamma(1) = 1
  CHECK(log_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-13));
  // Gamma(1/2) = sqrt(pi)
  const double ln_sqrt_pi = 0.5 * std::log(3.14159265358979323846);
  CHECK(std::abs(log_gamma(0.5) - ln_sqrt_pi) < 1e-12);
  CHECK(log_gamma(0.5) == doctest::Approx(0.57236494292470009).epsilon(1e-14));
}

TEST_CASE("log_gamma against the C library across the range") {
  for (double x : {1e-3, 1e-2, 0.4, 0.9, 1.5, 3.0, 7.7, 25.0, 123.0, 1e4,
                   1e6}) {
    const double ref = std::lgamma(x);
    const double tol = std::max(1e-12, 4e-15 * std::abs(ref));
    CHECK(std::abs(log_gamma(x) - ref) < tol);
  }
}

TEST_CASE("log_gamma rejects the nonpositive domain") {
  CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
  CHECK_THROWS_AS(log_gamma(-1.5), std::domain_error);
}

TEST_CASE("digamma reference values and finite-difference oracle") {
  // psi(1) = -Euler-Mascheroni
  CHECK(digamma(1.0) == doctest::Approx(-0.57721566490153286).epsilon(1e-12));
  // recurrence value psi(2) = psi(1) + 1
  CHECK(digamma(2.0) ==
        doctest::Approx(1.0 - 0.57721566490153286).epsilon(1e-12));
  // finite difference of log_gamma at x = 10
  const double h = 1e-6;
  const double fd = (log_gamma(10.0 + h) - log_gamma(10.0 - h)) / (2.0 * h);
  CHECK(std::abs(digamma(10.0) - fd) < 1e-6);
  CHECK_THROWS_AS(digamma(0.0), std::domain_error);
}

TEST_CASE("trigamma reference values and finite-difference oracle") {
  const double pi2_6 = 3.14159265358979323846 * 3.14159265358979323846 / 6.0;
  CHECK(trigamma(1.0) == doctest::Approx(pi2_6).epsilon(1e-10));
  CHECK(trigamma(2.0) == doctest::Approx(pi2_6 - 1.0).epsilon(1e-10));
  // second central difference of log_gamma at x = 7.5
  const double h = 1e-4;
  const double fd =
      (log_gamma(7.5 + h) - 2.0 * log_gamma(7.5) + log_gamma(7.5 - h)) /
      (h * h);
  CHECK(std::abs(trigamma(7.5) - fd) < 1e-5);
  CHECK_THROWS_AS(trigamma(-0.1), std::domain_error);
}

TEST_CASE("digamma/trigamma recurrences across the range") {
  for (double x = 0.1; x <= 100.0; x *= 1.7) {
    CHECK(std::abs(digamma(x + 1.0) - digamma(x) - 1.0 / x) < 1e-10);
    CHECK(std::abs(trigamma(x + 1.0) - trigamma(x) + 1.0 / (x * x)) < 1e-10);
  }
}

TEST_CASE("regularized incomplete gamma closed forms") {
  // s = 1 is the exponential CDF
  for (double x : {0.0, 0.3, 1.0, 4.5, 20.0})
    CHECK(reg_lower_inc_gamma(1.0, x) ==
          doctest::Approx(-std::expm1(-x)).epsilon(1e-14));
  CHECK(reg_lower_inc_gamma(3.7, 0.0) == 0.0);
  CHECK(reg_lower_inc_gamma(2.0, 800.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(reg_lower_inc_gamma(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(reg_lower_inc_gamma(1.0, -1.0), std::domain_error);
}

namespace {

// Quadrature oracle for P(s, x): the substitution v = t^s removes the
// endpoint singularity on [0, min(x, 1)]; the remainder is integrated
// directly. Tolerance scales with Gamma(s).
double gammainc_by_quadrature(double s, double x) {
  const double c = std::min(x, 1.0);
  const double tol = 1e-12 * std::max(1.0, std::exp(log_gamma(s)));
  double integral = oracles::simpson(
      [s](double v) { return std::exp(-std::pow(v, 1.0 / s)) / s; }, 0.0,
      std::pow(c, s), tol);
  if (x > c)
    integral += oracles::simpson(
        [s](double t) { return std::exp((s - 1.0) * std::log(t) - t); }, c,
        x, tol);
  return integral / std::exp(log_gamma(s));
}

}  // namespace

TEST_CASE("regularized incomplete gamma against quadrature") {
  // The single reference point first.
  CHECK(std::abs(reg_lower_inc_gamma(2.5, 3.0) -
                 gammainc_by_quadrature(2.5, 3.0)) < 1e-9);
  // Grid sweep: s in [0.1, 20], x in [0, 50].
  for (double s : {0.1, 0.5, 1.3, 4.0, 9.5, 20.0}) {
    for (double x : {0.05, 0.8, 3.0, 12.0, 50.0}) {
      CHECK(std::abs(reg_lower_inc_gamma(s, x) -
                     gammainc_by_quadrature(s, x)) < 1e-8);
    }
  }
}

TEST_CASE("gamma_cdf wraps the incomplete gamma") {
  CHECK(gamma_cdf(0.0, 2.0, 3.0) == 0.0);
  for (double x : {0.5, 2.0, 10.0})
    CHECK(gamma_cdf(x, 1.0, 2.0) ==
          doctest::Approx(-std::expm1(-x / 2.0)).epsilon(1e-14));
  // The gamma(1, 5) value at its own 90th percentile.
  CHECK(gamma_cdf(11.5129, 1.0, 5.0) == doctest::Approx(0.9).epsilon(1e-4));
  CHECK_THROWS_AS(gamma_cdf(-1.0, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(gamma_cdf(1.0, -1.0, 1.0), std::domain_error);
}

TEST_CASE("gamma_quantile reference values and round trip") {
  CHECK(gamma_quantile(0.0, 3.0, 2.0) == 0.0);
  // Exponential: q(0.9) = 5 ln 10, the threshold used throughout.
  CHECK(gamma_quantile(0.9, 1.0, 5.0) ==
        doctest::Approx(5.0 * std::log(10.0)).epsilon(1e-12));
  CHECK(gamma_quantile(0.9, 1.0, 5.0) ==
        doctest::Approx(11.512925464970229).epsilon(1e-12));
  // Round trip at a generic point.
  const double q = gamma_quantile(0.5, 3.0, 2.0);
  CHECK(gamma_cdf(q, 3.0, 2.0) == doctest::Approx(0.5).epsilon(1e-11));
  CHECK_THROWS_AS(gamma_quantile(1.0, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(gamma_quantile(-0.1, 1.0, 1.0), std::domain_error);
}

TEST_CASE("gamma quantile/cdf round trip over shapes and levels") {
  for (double shape : {0.3, 1.0, 2.5, 8.0}) {
    for (double scale : {0.5, 1.0, 7.0}) {
      for (int i = 1; i <= 99; i += 7) {
        const double p = i / 100.0;
        const double q = gamma_quantile(p, shape, scale);
        CHECK(std::abs(gamma_cdf(q, shape, scale) - p) < 1e-9);
      }
      // monotone in p
      double prev = -1.0;
      for (double p : {0.05, 0.25, 0.5, 0.75, 0.95}) {
        const double q = gamma_quantile(p, shape, scale);
        CHECK(q > prev);
        prev = q;
      }
    }
  }
}

TEST_CASE("normal quantile") {
  CHECK(normal_quantile(0.975) == doctest::Approx(1.959964).epsilon(1e-6));
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  for (double p : {0.001, 0.01, 0.3, 0.7, 0.99, 0.999})
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
  CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
}
