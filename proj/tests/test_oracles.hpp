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

// Test-only reference computations, kept independent of the library's own
// numeric paths: adaptive Simpson quadrature and brute-force helpers.

#ifndef EVINLIER_TEST_ORACLES_HPP
#define EVINLIER_TEST_ORACLES_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracles {

// Adaptive Simpson with explicit error control; deliberately not the
// Gauss-Kronrod rule the library uses.
inline double simpson_step(const std::function<double(double)>& f, double a,
                           double b, double fa, double fb, double fm,
                           double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  const double child_tol = std::max(0.5 * tol, 1e-17);
  return simpson_step(f, a, m, fa, fm, flm, left, child_tol, depth - 1) +
         simpson_step(f, m, b, fm, fb, frm, right, child_tol, depth - 1);
}

inline double simpson(const std::function<double(double)>& f, double a,
                      double b, double tol = 1e-12, int depth = 45) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fb, fm, whole, tol, depth);
}

// Mean and (n-1)-denominator variance.
inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

}  // namespace oracles

#endif  // EVINLIER_TEST_ORACLES_HPP
