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
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "forestprune/ensemble.hpp"
#include "forestprune/problem.hpp"
#include "forestprune/weights.hpp"

namespace forestprune {

enum class SearchRule { kSmallestIndex, kBestCorrelation, kNone };

std::string_view to_string(SearchRule rule);
SearchRule parse_search_rule(std::string_view name);

// How tree weights beta enter the objective.
//   kFixed:  beta = 1, the plain pruning problem.
//   kRidge:  beta free, penalty alpha2 * sum beta_i^2 (rho = 2).
//   kSubset: beta free, penalty alpha2 * #{beta_i != 0} (rho = 0).
enum class BetaMode { kFixed, kRidge, kSubset };

BetaMode beta_mode_for_rho(int rho);

struct Penalty {
  double alpha = 0.0;
  BetaMode beta_mode = BetaMode::kFixed;
  double alpha2 = 0.0;
};

// Current (z, beta) plus the residual cache
//   r = y - base - gamma * sum_i beta_i D_i z_i,
// maintained incrementally by set_block().
class SolverState {
 public:
  static SolverState zeros(const PruneProblem& problem);
  static SolverState from_model(const PruneProblem& problem,
                                const PrunedModel& model);

  int size() const { return static_cast<int>(kept_.size()); }
  const std::vector<int>& kept_depth() const { return kept_; }
  const std::vector<double>& beta() const { return beta_; }
  const Vector& residual() const { return residual_; }
  bool in_support(int i) const;

  // Returns the number of D columns read.
  Index set_block(const PruneProblem& problem, int tree, int kept_depth,
                  double beta);
  // Recomputes the residual from scratch.
  void refresh(const PruneProblem& problem);

  PrunedModel model() const { return {kept_, beta_}; }

 private:
  std::vector<int> kept_;
  std::vector<double> beta_;
  Vector residual_;
};

// Objective recomputed from scratch (ignores the residual cache):
//   (1/m)||y - base - gamma sum beta_i D_i z_i||^2
//     + (alpha/K) sum_i sum_{k <= k_i} w_{i,k} + alpha2 * ||beta||_rho^rho
// where only trees with kept depth > 0 contribute to the beta term.
double objective(const PruneProblem& problem, const WeightScheme& weights,
                 const SolverState& state, const Penalty& penalty);

// Records every objective change a solve makes, for verification. Each pair
// is (objective before, objective after), both recomputed from scratch.
struct SolverTrace {
  bool record_objectives = false;
  std::vector<std::pair<double, double>> block_updates;
  std::vector<std::pair<double, double>> accepted_swaps;
  // Column reads of D matrices during each full pass.
  std::vector<Index> column_reads_per_pass;
};

struct SolverOptions {
  // A pass that improves the objective by less than tol (relative) ends CBCD.
  double tol = 1e-8;
  SearchRule rule = SearchRule::kSmallestIndex;
  // best-correlation rule: correlate against the raw response instead of the
  // current residual.
  bool correlate_with_response = false;
  std::uint64_t seed = 0;
  int max_passes = 100000;
  SolverTrace* trace = nullptr;
};

struct PruneSolution {
  PrunedModel model;
  double objective = 0.0;
  ModelSize size;
  double train_mse = 0.0;
  // Full passes over all blocks, including those inside local search.
  int passes = 0;
};

ModelSize measure(const PruneProblem& problem, const PrunedModel& model);

// Exact minimization over block `tree` with the rest fixed: enumerates the
// d+1 prefix candidates, ties going to the smaller kept depth. Updates the
// state in place and returns the new kept depth. Requires kFixed.
int block_update(const PruneProblem& problem, const WeightScheme& weights,
                 double alpha, SolverState& state, int tree);

// Joint (z, beta) block update; beta is closed-form for rho = 2 and hard
// thresholded least squares for rho = 0. Returns the new (kept depth, beta).
std::pair<int, double> joint_block_update(const PruneProblem& problem,
                                          const WeightScheme& weights,
                                          const Penalty& penalty,
                                          SolverState& state, int tree);

// Cyclic block coordinate descent to convergence, interlaced with local
// search rounds until a round yields no improvement.
PruneSolution cbcd_solve(const PruneProblem& problem,
                         const WeightScheme& weights, double alpha,
                         SolverState init, const SolverOptions& options = {});

// CBCD over (z_i, beta_i) blocks with the same local-search contract;
// swapped-in trees restart at beta = 1.
PruneSolution joint_solve(const PruneProblem& problem,
                          const WeightScheme& weights, const Penalty& penalty,
                          SolverState init, const SolverOptions& options = {});

// One local-search move from a CBCD fixed point: zero a random supported
// tree, swap in an unsupported one at full depth, rerun CBCD, and keep the
// result only if the objective strictly improves.
bool local_search_step(const PruneProblem& problem, const WeightScheme& weights,
                       const Penalty& penalty, SolverState& state,
                       const SolverOptions& options, std::mt19937_64& rng);

// Tree chosen by the swap rule among unsupported trees, or -1 if none.
int select_swap_in(const PruneProblem& problem, const SolverState& state,
                   SearchRule rule, bool correlate_with_response);

// Smallest alpha at which no single block update from z = 0 improves the
// objective, floored at kAlphaFloor.
inline constexpr double kAlphaFloor = 1e-10;
double alpha_max(const PruneProblem& problem, const WeightScheme& weights);

struct PathPoint {
  double alpha = 0.0;
  PruneSolution solution;
  std::optional<double> valid_mse;
};

struct PathResult {
  std::vector<PathPoint> points;
  int total_passes() const;
};

struct PathOptions {
  int grid_size = 50;
  // Last alpha is alpha_max * min_ratio; the grid is geometric.
  double min_ratio = 1e-4;
  bool warm_start = true;
  SolverOptions solver;
};

std::vector<double> alpha_grid(double alpha_max, int grid_size,
                               double min_ratio);

PathResult regularization_path(const PruneProblem& problem,
                               const WeightScheme& weights,
                               const PathOptions& options = {});

void attach_validation(PathResult& path, const Ensemble& e, const Matrix& X,
                       const Vector& y);

// Global optimum of the fixed-beta problem by full enumeration of the
// (d+1)^n kept-depth configurations. Throws std::invalid_argument when that
// exceeds kOracleLimit.
inline constexpr double kOracleLimit = 1e7;
PruneSolution exhaustive_oracle(const PruneProblem& problem,
                                const WeightScheme& weights, double alpha);

}  // namespace forestprune
