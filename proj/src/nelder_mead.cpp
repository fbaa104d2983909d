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

#include "evinlier/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace evinlier {

NelderMeadResult nelder_mead_minimize(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> x0, const NelderMeadOptions& options) {
  const std::size_t n = x0.size();
  const std::size_t m = n + 1;

  std::vector<std::vector<double>> simplex(m,
                                           std::vector<double>(x0.begin(),
                                                               x0.end()));
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += options.initial_step;

  std::vector<double> fv(m);
  for (std::size_t i = 0; i < m; ++i) fv[i] = f(simplex[i]);

  std::vector<std::size_t> order(m);
  auto sort_order = [&]() {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
  };
  sort_order();

  NelderMeadResult result;
  std::vector<double> centroid(n), trial(n);

  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    const std::size_t best = order[0];
    const std::size_t worst = order[m - 1];
    const std::size_t second_worst = order[m - 2];

    // Termination: simplex diameter and objective spread.
    double diameter = 0.0;
    for (std::size_t i = 1; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j)
        diameter = std::max(diameter,
                            std::abs(simplex[order[i]][j] - simplex[best][j]));
    const double spread = fv[worst] - fv[best];
    if (diameter < options.tolerance && spread < options.tolerance) {
      result.converged = true;
      break;
    }

    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i)
        if (i != worst) s += simplex[i][j];
      centroid[j] = s / static_cast<double>(n);
    }

    auto blend = [&](double coef) {
      for (std::size_t j = 0; j < n; ++j)
        trial[j] = centroid[j] + coef * (simplex[worst][j] - centroid[j]);
      return f(trial);
    };

    const double f_reflect = blend(-1.0);
    if (f_reflect < fv[best]) {
      std::vector<double> reflect = trial;
      const double f_expand = blend(-2.0);
      if (f_expand < f_reflect) {
        simplex[worst] = trial;
        fv[worst] = f_expand;
      } else {
        simplex[worst] = std::move(reflect);
        fv[worst] = f_reflect;
      }
    } else if (f_reflect < fv[second_worst]) {
      simplex[worst] = trial;
      fv[worst] = f_reflect;
    } else {
      const double f_contract =
          f_reflect < fv[worst] ? blend(-0.5) : blend(0.5);
      if (f_contract < std::min(f_reflect, fv[worst])) {
        simplex[worst] = trial;
        fv[worst] = f_contract;
      } else {
        // Shrink toward the best vertex.
        for (std::size_t i = 0; i < m; ++i) {
          if (i == best) continue;
          for (std::size_t j = 0; j < n; ++j)
            simplex[i][j] =
                simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
          fv[i] = f(simplex[i]);
        }
      }
    }
    sort_order();
    if (options.record_best) options.record_best->push_back(fv[order[0]]);
  }

  sort_order();
  result.x = simplex[order[0]];
  result.value = fv[order[0]];
  result.iterations = iter;
  return result;
}

}  // namespace evinlier
