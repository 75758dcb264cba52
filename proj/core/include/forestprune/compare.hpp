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

#include <cstdint>
#include <string>
#include <vector>

#include "forestprune/baselines.hpp"
#include "forestprune/dataset.hpp"
#include "forestprune/ensemble.hpp"
#include "forestprune/solver.hpp"
#include "forestprune/weights.hpp"

namespace forestprune {

// A post-processed ensemble chosen by one method under a node budget.
struct MethodResult {
  std::string method;
  // Human-readable description of the selected parameter.
  std::string setting;
  // CCP rewrites the trees, so every result carries its own ensemble.
  Ensemble ensemble;
  PrunedModel model;
  ModelSize size;
  double train_mse = 0.0;
  double valid_mse = 0.0;
};

struct CompareOptions {
  Index node_budget = 50;
  Weighting weighting = Weighting::kNode;
  SearchRule rule = SearchRule::kSmallestIndex;
  int grid_size = 50;
  double tol = 1e-8;
  // Ridge polish strength for ForestPrune; 0 disables polishing.
  double alpha2 = 1e-2;
  std::uint64_t seed = 0;
  int lasso_grid = 100;
  // Exact BSTS runs over this many leading trees.
  int bsts_candidates = 20;
};

// Each method sweeps its own parameter and keeps the candidate with the
// lowest validation MSE among those within the node budget. With nothing
// feasible the result is the empty model.
MethodResult select_forestprune(const Ensemble& e, const Dataset& train,
                                const Dataset& valid, const CompareOptions& options);
MethodResult select_trim(const Ensemble& e, const Dataset& train,
                         const Dataset& valid, const CompareOptions& options);
MethodResult select_lasso(const Ensemble& e, const Dataset& train,
                          const Dataset& valid, const CompareOptions& options);
MethodResult select_ccp(const Ensemble& e, const Dataset& train,
                        const Dataset& valid, const CompareOptions& options);
MethodResult select_bsts(const Ensemble& e, const Dataset& train,
                         const Dataset& valid, const CompareOptions& options);

// ForestPrune followed by the four baselines, in that order.
std::vector<MethodResult> compare_methods(const Ensemble& e, const Dataset& train,
                                          const Dataset& valid,
                                          const CompareOptions& options);

}  // namespace forestprune
