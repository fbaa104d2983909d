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

#include "evinlier/sampler.hpp"

#include <cmath>
#include <stdexcept>

#include "evinlier/rng.hpp"
#include "evinlier/specfun.hpp"

namespace evinlier {

void SampleSpec::validate() const {
  if (n < 1) throw std::invalid_argument("SampleSpec: n must be >= 1");
  theta.validate();
}

namespace {

double invert_one(double uniform, const FevimmParams& theta,
                  double bulk_norm) {
  if (uniform <= theta.phi1) return 0.0;
  if (uniform <= 1.0 - theta.phi2) {
    const double k =
        (uniform - theta.phi1) / (1.0 - theta.phi1 - theta.phi2);
    return gamma_quantile(k * bulk_norm, theta.eta, theta.beta);
  }
  const double c = (uniform - (1.0 - theta.phi2)) / theta.phi2;
  if (std::abs(theta.xi) < kXiZeroTol)
    return theta.u - theta.sigma * std::log1p(-c);
  return theta.u +
         theta.sigma / theta.xi * std::expm1(-theta.xi * std::log1p(-c));
}

}  // namespace

std::vector<double> sample(const SampleSpec& spec) {
  spec.validate();
  const double bulk_norm =
      gamma_cdf(spec.theta.u, spec.theta.eta, spec.theta.beta);
  Xoshiro256pp rng(spec.seed);
  std::vector<double> out(spec.n);
  for (auto& x : out) x = invert_one(rng.uniform_open01(), spec.theta, bulk_norm);
  return out;
}

std::vector<double> sample_from_uniforms(std::span<const double> uniforms,
                                         const FevimmParams& theta) {
  theta.validate();
  const double bulk_norm = gamma_cdf(theta.u, theta.eta, theta.beta);
  std::vector<double> out(uniforms.size());
  for (std::size_t i = 0; i < uniforms.size(); ++i) {
    const double v = uniforms[i];
    if (!(v > 0.0 && v < 1.0))
      throw std::invalid_argument(
          "sample_from_uniforms: uniforms must lie in (0, 1)");
    out[i] = invert_one(v, theta, bulk_norm);
  }
  return out;
}

std::vector<double> sample_fevmm(const FevimmParams& theta, std::size_t n,
                                 std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  std::vector<double> out(n);
  for (auto& x : out) x = fevmm_quantile(rng.uniform_open01(), theta);
  return out;
}

std::vector<double> sample_evmm(const EvmmParams& params, std::size_t n,
                                std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  std::vector<double> out(n);
  for (auto& x : out) x = evmm_quantile(rng.uniform_open01(), params);
  return out;
}

}  // namespace evinlier
