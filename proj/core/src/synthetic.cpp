// Copyright 2026 The ForestPrune Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "forestprune/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace forestprune {

Dataset make_friedman1(Index rows, double noise, std::uint64_t seed) {
  constexpr Index kFeatures = 10;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Dataset data;
  data.X.resize(rows, kFeatures);
  data.y.resize(rows);
  for (Index j = 0; j < rows; ++j) {
    for (Index f = 0; f < kFeatures; ++f) data.X(j, f) = unit(rng);
    const auto x = data.X.row(j);
    data.y(j) = 10.0 * std::sin(std::numbers::pi * x(0) * x(1)) +
                20.0 * (x(2) - 0.5) * (x(2) - 0.5) + 10.0 * x(3) +
                5.0 * x(4) + noise * gauss(rng);
  }
  for (Index f = 0; f < kFeatures; ++f) {
    data.feature_names.push_back("x" + std::to_string(f + 1));
  }
  return data;
}

}  // namespace forestprune
