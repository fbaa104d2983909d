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

#ifndef EVINLIER_SAMPLER_HPP
#define EVINLIER_SAMPLER_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "evinlier/model.hpp"

namespace evinlier {

struct SampleSpec {
  std::size_t n = 0;
  FevimmParams theta;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Exact inverse-CDF sampling. Each uniform draw U is routed through three
/// branches: U <= phi1 gives 0; phi1 < U <= 1 - phi2 inverts the truncated
/// gamma bulk; otherwise the GPD tail is inverted (with the exponential form
/// when xi is at its zero cutover). Deterministic under the seed.
std::vector<double> sample(const SampleSpec& spec);

/// Applies the same three-branch inversion to caller-supplied uniforms in
/// (0, 1). Element i of the result depends only on uniforms[i].
std::vector<double> sample_from_uniforms(std::span<const double> uniforms,
                                         const FevimmParams& theta);

/// Inverse-CDF samplers for the baseline models (no atom at zero).
std::vector<double> sample_fevmm(const FevimmParams& theta, std::size_t n,
                                 std::uint64_t seed);
std::vector<double> sample_evmm(const EvmmParams& params, std::size_t n,
                                std::uint64_t seed);

}  // namespace evinlier

#endif  // EVINLIER_SAMPLER_HPP
