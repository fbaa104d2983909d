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

#ifndef EVINLIER_NELDER_MEAD_HPP
#define EVINLIER_NELDER_MEAD_HPP

#include <functional>
#include <span>
#include <vector>

namespace evinlier {

struct NelderMeadOptions {
  int max_iterations = 20000;
  /// Converged when both the simplex diameter and the objective spread fall
  /// below this value.
  double tolerance = 1e-8;
  /// Absolute displacement used to build the initial simplex.
  double initial_step = 0.25;
  /// When non-null, the best objective value after each iteration is
  /// appended here (a nonincreasing sequence).
  std::vector<double>* record_best = nullptr;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Minimizes f by the Nelder-Mead simplex method with the standard
/// reflection/expansion/contraction/shrink coefficients (1, 2, 0.5, 0.5).
NelderMeadResult nelder_mead_minimize(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> x0, const NelderMeadOptions& options = {});

}  // namespace evinlier

#endif  // EVINLIER_NELDER_MEAD_HPP
