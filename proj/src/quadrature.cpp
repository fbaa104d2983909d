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

#include "evinlier/quadrature.hpp"

#include <cmath>
#include <vector>

namespace evinlier {

namespace {

// 15-point Kronrod nodes/weights on [-1, 1]; odd-indexed nodes form the
// embedded 7-point Gauss rule.
constexpr double kNodes[15] = {
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,                0.207784955007898,
    0.405845151377397,  0.586087235467691,  0.741531185599394,
    0.864864423359769,  0.949107912342759,  0.991455371120813};
constexpr double kWeightsK[15] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728, 0.204432940075298,
    0.190350578064785, 0.169004726639267, 0.140653259715525,
    0.104790010322250, 0.063092092629979, 0.022935322010529};
constexpr double kWeightsG[7] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870};

struct Panel {
  double a, b, value, error;
};

Panel evaluate_panel(const std::function<double(double)>& f, double a,
                     double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double kron = 0.0, gauss = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double fx = f(mid + half * kNodes[i]);
    kron += kWeightsK[i] * fx;
    if (i % 2 == 1) gauss += kWeightsG[i / 2] * fx;
  }
  kron *= half;
  gauss *= half;
  const double diff = std::abs(kron - gauss);
  // QUADPACK-style sharpened error estimate.
  const double err =
      diff > 0.0 ? std::min(diff, 200.0 * diff * std::sqrt(diff)) : 0.0;
  return {a, b, kron, err};
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol, double abs_tol, int max_subdivisions) {
  if (a == b) return 0.0;
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }

  std::vector<Panel> stack;
  stack.push_back(evaluate_panel(f, a, b));
  double total = stack.back().value;
  double total_err = stack.back().error;

  int splits = 0;
  std::vector<Panel> done;
  while (!stack.empty() && splits < max_subdivisions) {
    const double tol = std::max(abs_tol, rel_tol * std::abs(total));
    Panel p = stack.back();
    stack.pop_back();
    if (p.error <= tol * (p.b - p.a) / (b - a) || p.b - p.a < 1e-14 * (b - a)) {
      done.push_back(p);
      continue;
    }
    const double mid = 0.5 * (p.a + p.b);
    Panel left = evaluate_panel(f, p.a, mid);
    Panel right = evaluate_panel(f, mid, p.b);
    total += left.value + right.value - p.value;
    total_err += left.error + right.error - p.error;
    stack.push_back(left);
    stack.push_back(right);
    ++splits;
  }

  // Re-accumulate from panels for a consistent final value.
  double result = 0.0;
  for (const auto& p : done) result += p.value;
  for (const auto& p : stack) result += p.value;
  return sign * result;
}

}  // namespace evinlier
