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

#ifndef EVINLIER_QUADRATURE_HPP
#define EVINLIER_QUADRATURE_HPP

#include <functional>

namespace evinlier {

/// Adaptive Gauss-Kronrod (G7/K15) integration of f over [a, b]. Intervals
/// are bisected until the local K15-G7 error estimate meets the tolerance
/// apportioned to the interval or the subdivision budget runs out.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-9, double abs_tol = 1e-12,
                 int max_subdivisions = 4000);

}  // namespace evinlier

#endif  // EVINLIER_QUADRATURE_HPP
