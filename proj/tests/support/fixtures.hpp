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

#pragma once

// Small seeded datasets and ensembles shared by the unit tests.

#include <forestprune/forestprune.hpp>

namespace fp_test {

inline forestprune::Dataset friedman(forestprune::Index rows, std::uint64_t seed,
                                     double noise = 1.0) {
  return forestprune::make_friedman1(rows, noise, seed);
}

inline forestprune::Ensemble small_boosting(const forestprune::Dataset& d, int trees = 12,
                                            int depth = 3, std::uint64_t seed = 0) {
  forestprune::BoostingParams p;
  p.n_trees = trees;
  p.max_depth = depth;
  p.gamma = 0.3;
  p.row_subsample = 0.5;
  p.min_leaf = 3;
  p.seed = seed;
  return forestprune::fit_boosting(d, p);
}

inline forestprune::Ensemble small_bagging(const forestprune::Dataset& d, int trees = 10,
                                           int depth = 4, std::uint64_t seed = 0) {
  forestprune::BaggingParams p;
  p.n_trees = trees;
  p.max_depth = depth;
  p.seed = seed;
  return forestprune::fit_bagging(d, p);
}

}  // namespace fp_test
