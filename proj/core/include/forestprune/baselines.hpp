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
#include <span>
#include <vector>

#include "forestprune/dataset.hpp"
#include "forestprune/ensemble.hpp"

namespace forestprune {

// Order in which baseline_trim keeps trees: a seeded permutation for bagging,
// sequence order for boosting. Keeping the first `keep` entries gives nested
// models along a budget sweep.
std::vector<int> trim_order(const Ensemble& e, std::uint64_t seed);

// Fewer bagging/boosting iterations. Kept bagging trees are reweighted to
// average (beta = n / keep); boosting keeps beta = 1.
PrunedModel baseline_trim(const Ensemble& e, int keep, std::uint64_t seed);

struct LassoOptions {
  double tol = 1e-10;
  int max_sweeps = 100000;
};

struct LassoPath {
  std::vector<double> lambdas;
  std::vector<Vector> betas;
  // Max-abs violation of the subgradient optimality conditions at each point.
  std::vector<double> kkt_violation;
};

// lambda above which beta = 0 is optimal: max_i |2 <c_i, r>| / m.
double lasso_lambda_max(const Matrix& columns, const Vector& r);

// Coordinate descent with soft thresholding on
//   (1/m)||r - C beta||^2 + lambda ||beta||_1
// along a descending lambda grid, warm-started point to point.
LassoPath lasso_path(const Matrix& columns, const Vector& r,
                     std::span<const double> lambdas,
                     const LassoOptions& options = {});

double lasso_kkt_violation(const Matrix& columns, const Vector& r,
                           const Vector& beta, double lambda);

// LASSO over whole trees: columns gamma * T_i(X), response y - base.
LassoPath lasso_prune(const Ensemble& e, const Dataset& train,
                      std::span<const double> lambdas,
                      const LassoOptions& options = {});

// Geometric grid from lambda_max down to lambda_max * min_ratio.
std::vector<double> lasso_lambda_grid(double lambda_max, int count,
                                      double min_ratio = 1e-4);

// Cost-complexity pruning of every tree with one shared parameter.
Ensemble ccp_sweep(const Ensemble& e, double ccp_alpha);

// Sorted distinct collapse thresholds over all trees, i.e. the values of
// ccp_alpha at which ccp_sweep changes.
std::vector<double> ccp_alphas(const Ensemble& e);

enum class BstsMode { kExact, kHeuristic };

struct BstsResult {
  // Per-tree weights, zero outside the selection.
  Vector beta;
  std::vector<int> selected;
  double objective = 0.0;
  Index nodes = 0;

  PrunedModel model(const Ensemble& e) const;
};

inline constexpr int kBstsExactLimit = 22;

// Best subset tree selection: minimize (1/m)||y - base - gamma T_S beta_S||^2
// over supports S with total node count <= node_budget, refitting beta by
// least squares. Only the first `candidates` trees are eligible (-1: all).
// Exact mode enumerates feasible supports; heuristic mode starts from the
// best budget-feasible LASSO support and applies swap local search.
BstsResult bsts(const Ensemble& e, const Dataset& train, Index node_budget,
                BstsMode mode, int candidates = -1);

}  // namespace forestprune
