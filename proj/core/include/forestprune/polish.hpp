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

#include "forestprune/ensemble.hpp"
#include "forestprune/problem.hpp"

namespace forestprune {

// Columns gamma * D_i z_i* for the trees kept by a pruning solution.
struct PolishBasis {
  Matrix columns;
  // Original tree index of each column.
  std::vector<int> trees;

  static PolishBasis build(const PruneProblem& problem,
                           const PrunedModel& model);
  Index size() const { return columns.cols(); }
};

// (1/m)||r - B beta||^2 + alpha2 ||beta||_rho^rho, rho in {0, 2}.
double polish_objective(const Matrix& B, const Vector& r, const Vector& beta,
                        double alpha2, int rho);

// Ridge reweighting via the normal equations (B^T B / m + alpha2 I) beta =
// B^T r / m. alpha2 = 0 falls back to minimum-norm least squares.
Vector ridge_polish(const PolishBasis& basis, const Vector& y_resid,
                    double alpha2);

struct SubsetPolishOptions {
  int max_iters = 1000;
  double tol = 1e-8;
  // Starting point; empty means all ones (the unpolished ensemble).
  Vector start;
  // Extra support-search starts drawn at random, after the greedy ones.
  int restarts = 16;
  std::uint64_t seed = 0;
};

struct SubsetPolishResult {
  Vector beta;
  double objective = 0.0;
  int iterations = 0;
  // Objective after each hard-thresholding step.
  std::vector<double> history;
};

// Best-subset reweighting by iterative hard thresholding: gradient step of
// size 1/L (L = top eigenvalue of 2 B^T B / m, by power iteration) followed
// by the hard threshold of the L0 proximal map, then a least-squares refit on
// the final support. The refit support is improved by drop/add/swap search,
// also run from greedy forward/backward supports and seeded random ones; the
// best result wins.
SubsetPolishResult subset_polish(const PolishBasis& basis, const Vector& y_resid,
                                 double alpha2,
                                 const SubsetPolishOptions& options = {});

// Optimal best-subset reweighting by enumerating every support with a
// least-squares refit. Limited to 20 columns.
inline constexpr Index kExactSubsetLimit = 20;
SubsetPolishResult subset_polish_exact(const PolishBasis& basis,
                                       const Vector& y_resid, double alpha2);

// Subset polishing along an ascending alpha2 grid, each solve warm-started
// from and restricted to the previous support, so supports are nested.
std::vector<SubsetPolishResult> subset_polish_path(
    const PolishBasis& basis, const Vector& y_resid,
    std::span<const double> alpha2_grid, const SubsetPolishOptions& options = {});

// Scatters polished weights back to a full per-tree model (zero kept depth
// for trees outside the basis or with zero weight).
PrunedModel apply_polish(const PrunedModel& pruned, const PolishBasis& basis,
                         const Vector& beta);

}  // namespace forestprune
