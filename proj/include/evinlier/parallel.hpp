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

#ifndef EVINLIER_PARALLEL_HPP
#define EVINLIER_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace evinlier {

/// Resolves a requested worker count: values <= 0 mean "use the hardware
/// concurrency", and the result is clamped to at least 1.
int effective_threads(int requested);

/// Runs body(i) for i in [0, count). Work items are claimed by index from a
/// shared counter, so results written to slot i are identical for any worker
/// count. The first exception thrown by a body is rethrown on the caller.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace evinlier

#endif  // EVINLIER_PARALLEL_HPP
