// Copyright 2026 The effcorp Authors.
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

#ifndef EFFCORP_RANDOM_H_
#define EFFCORP_RANDOM_H_

#include <cstddef>
#include <random>
#include <utility>
#include <vector>

namespace effcorp {

// Fisher-Yates over raw engine output, so orders do not depend on the
// standard library's distribution implementations.
template <typename T>
void SeededShuffle(std::vector<T> *items, std::mt19937_64 *rng) {
  for (std::size_t i = items->size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>((*rng)() % i);
    std::swap((*items)[i - 1], (*items)[j]);
  }
}

}  // namespace effcorp

#endif  // EFFCORP_RANDOM_H_
