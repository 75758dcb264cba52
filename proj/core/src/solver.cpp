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

#include "forestprune/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>

namespace forestprune {

std::string_view to_string(SearchRule rule) {
  switch (rule) {
    case SearchRule::kSmallestIndex: return "smallest-index";
    case SearchRule::kBestCorrelation: return "best-corr";
    case SearchRule::kNone: return "none";
  }
  return "none";
}

SearchRule parse_search_rule(std::string_view name) {
  if (name == "smallest-index") return SearchRule::kSmallestIndex;
  if (name == "best-corr") return SearchRule::kBestCorrelation;
  if (name == "none") return SearchRule::kNone;
  throw std::invalid_argument("unknown search rule '" + std::string(name) +
                              "' (expected smallest-index, best-corr or none)");
}

BetaMode beta_mode_for_rho(int rho) {
  if (rho == 2) return BetaMode::kRidge;
  if (rho == 0) return BetaMode::kSubset;
  throw std::invalid_argument("rho must be 0 or 2, got " + std::to_string(rho));
}

namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

void check_shapes(const PruneProblem& problem, const WeightScheme& weights) {
  if (weights.size() != problem.size() || weights.depth() != problem.depth()) {
    throw std::invalid_argument("weight scheme does not match the problem shape");
  }
}

void check_state(const PruneProblem& problem, const SolverState& state) {
  if (state.size() != problem.size() ||
      state.residual().size() != problem.rows()) {
    throw std::invalid_argument("solver state does not match the problem shape");
  }
}

double layer_penalty(const WeightScheme& weights, double alpha, int tree,
                     int kept) {
  const double K = weights.normalization();
  if (kept == 0 || K <= 0.0) return 0.0;
  return alpha / K * weights.kept_weight(tree, std::min(kept, weights.depth()));
}

double beta_penalty(const Penalty& penalty, int kept, double beta) {
  if (kept == 0) return 0.0;
  switch (penalty.beta_mode) {
    case BetaMode::kFixed: return 0.0;
    case BetaMode::kRidge: return penalty.alpha2 * beta * beta;
    case BetaMode::kSubset: return beta != 0.0 ? penalty.alpha2 : 0.0;
  }
  return 0.0;
}

double total_penalty(const WeightScheme& weights, const Penalty& penalty,
                     const SolverState& state) {
  double sum = 0.0;
  for (int i = 0; i < state.size(); ++i) {
    const int k = state.kept_depth()[at(i)];
    sum += layer_penalty(weights, penalty.alpha, i, k) +
           beta_penalty(penalty, k, state.beta()[at(i)]);
  }
  return sum;
}

double correlation(const Vector& a, const Vector& b) {
  const double ma = a.mean();
  const double mb = b.mean();
  const auto ca = a.array() - ma;
  const auto cb = b.array() - mb;
  const double va = ca.square().sum();
  const double vb = cb.square().sum();
  if (va <= 0.0 || vb <= 0.0) return 0.0;
  return (ca * cb).sum() / std::sqrt(va * vb);
}

struct Choice {
  int kept = 0;
  double beta = 0.0;
  double delta = 0.0;
};

// CBCD machinery over a borrowed state. Block candidates are scored through
// h = D^T (residual with the block removed) and prefix Gram norms, so a block
// update reads each nonzero column of D once, plus the columns it changes.
class Engine {
 public:
  Engine(const PruneProblem& problem, const WeightScheme& weights,
         const Penalty& penalty, SolverState& state,
         const SolverOptions& options)
      : problem_(problem), weights_(weights), penalty_(penalty), state_(state),
        options_(options), rng_(options.seed) {
    check_shapes(problem, weights);
    check_state(problem, state);
    if (penalty.alpha < 0.0 || penalty.alpha2 < 0.0) {
      throw std::invalid_argument("regularization parameters must be >= 0");
    }
  }

  int passes() const { return passes_; }

  double objective() const {
    return state_.residual().squaredNorm() / static_cast<double>(problem_.rows()) +
           total_penalty(weights_, penalty_, state_);
  }

  Choice best_choice(int tree) {
    const auto& D = problem_.block(tree);
    const int pd = D.path_depth();
    const bool fixed = penalty_.beta_mode == BetaMode::kFixed;
    Choice best{0, fixed ? 1.0 : 0.0, 0.0};
    if (pd == 0) return best;

    const double m = static_cast<double>(problem_.rows());
    const double g = problem_.gamma();
    const int k_cur = std::min(state_.kept_depth()[at(tree)], pd);
    const double b_cur = fixed ? 1.0 : state_.beta()[at(tree)];

    h_.noalias() = D.values().leftCols(pd).transpose() * state_.residual();
    column_reads_ += pd;
    if (k_cur > 0 && b_cur != 0.0) {
      h_ += g * b_cur * problem_.gram(tree).leftCols(k_cur).rowwise().sum();
    }
    const Vector& q = problem_.prefix_norms(tree);

    double s = 0.0;
    for (int k = 1; k <= pd; ++k) {
      s += h_(k - 1);
      const double Q = q(k);
      double beta = 1.0;
      double loss_delta = 0.0;
      switch (penalty_.beta_mode) {
        case BetaMode::kFixed:
          loss_delta = (-2.0 * g * s + g * g * Q) / m;
          break;
        case BetaMode::kRidge:
          if (Q <= 0.0) continue;
          beta = g * s / (g * g * Q + m * penalty_.alpha2);
          loss_delta = (-2.0 * beta * g * s + beta * beta * g * g * Q) / m +
                       penalty_.alpha2 * beta * beta;
          break;
        case BetaMode::kSubset:
          if (Q <= 0.0) continue;
          beta = s / (g * Q);
          loss_delta = -s * s / (Q * m) + penalty_.alpha2;
          break;
      }
      const double total =
          loss_delta + layer_penalty(weights_, penalty_.alpha, tree, k);
      if (total < best.delta) best = {k, beta, total};
    }
    return best;
  }

  bool update(int tree) {
    const bool record = options_.trace && options_.trace->record_objectives;
    const double before = record ? forestprune::objective(problem_, weights_, state_, penalty_) : 0.0;

    const Choice c = best_choice(tree);
    const bool fixed = penalty_.beta_mode == BetaMode::kFixed;
    const int k_old = state_.kept_depth()[at(tree)];
    const double b_old = state_.beta()[at(tree)];
    const double b_new = fixed ? b_old : c.beta;
    const bool changed = c.kept != k_old || (!fixed && b_new != b_old);
    if (changed) column_reads_ += state_.set_block(problem_, tree, c.kept, b_new);

    if (record) {
      options_.trace->block_updates.emplace_back(
          before, forestprune::objective(problem_, weights_, state_, penalty_));
    }
    return changed;
  }

  // Full passes until one improves the objective by no more than tol.
  void cbcd() {
    double previous = objective();
    while (passes_ < options_.max_passes) {
      column_reads_ = 0;
      bool changed = false;
      for (int t = 0; t < problem_.size(); ++t) changed |= update(t);
      ++passes_;
      if (options_.trace) {
        options_.trace->column_reads_per_pass.push_back(column_reads_);
      }
      const double current = objective();
      if (!changed || previous - current <= options_.tol * std::abs(previous)) {
        break;
      }
      previous = current;
    }
  }

  std::vector<int> support() const {
    std::vector<int> s;
    for (int i = 0; i < state_.size(); ++i) {
      if (state_.in_support(i)) s.push_back(i);
    }
    return s;
  }

  int random_member(const std::vector<int>& set) {
    std::uniform_int_distribution<std::size_t> pick(0, set.size() - 1);
    return set[pick(rng_)];
  }

  // Zero tree xi, swap in the rule's choice at full depth, rerun CBCD; keep
  // the move only on strict improvement.
  bool try_swap(int xi) {
    const int in = select_swap_in(problem_, state_, options_.rule,
                                  options_.correlate_with_response);
    if (in < 0) return false;
    const bool fixed = penalty_.beta_mode == BetaMode::kFixed;
    const SolverState saved = state_;
    const double before = objective();
    const double before_exact =
        options_.trace ? forestprune::objective(problem_, weights_, state_, penalty_) : 0.0;

    state_.set_block(problem_, xi, 0, fixed ? state_.beta()[at(xi)] : 0.0);
    state_.set_block(problem_, in, problem_.depth(), 1.0);
    cbcd();
    const double after = objective();
    if (after < before - options_.tol * std::abs(before)) {
      if (options_.trace) {
        options_.trace->accepted_swaps.emplace_back(
            before_exact, forestprune::objective(problem_, weights_, state_, penalty_));
      }
      return true;
    }
    state_ = saved;
    return false;
  }

  bool local_search_step() {
    const auto s = support();
    if (s.empty() || static_cast<int>(s.size()) == problem_.size()) return false;
    return try_swap(random_member(s));
  }

  // CBCD, then local-search rounds until one fails: at most n accepted swaps
  // and at most 3n draws of xi per round. Re-drawing an index already tried
  // in the round would replay the same deterministic move, so it is skipped.
  void solve() {
    cbcd();
    if (options_.rule == SearchRule::kNone) return;
    const int n = problem_.size();
    for (int accepted = 0; accepted < n; ++accepted) {
      bool improved = false;
      std::unordered_set<int> tried;
      for (int draw = 0; draw < 3 * n; ++draw) {
        const auto s = support();
        if (s.empty() || static_cast<int>(s.size()) == n) break;
        const int xi = random_member(s);
        if (!tried.insert(xi).second) continue;
        if (try_swap(xi)) {
          improved = true;
          break;
        }
      }
      if (!improved) break;
    }
  }

 private:
  const PruneProblem& problem_;
  const WeightScheme& weights_;
  Penalty penalty_;
  SolverState& state_;
  const SolverOptions& options_;
  std::mt19937_64 rng_;
  Vector h_;
  int passes_ = 0;
  Index column_reads_ = 0;
};

PruneSolution make_solution(const PruneProblem& problem,
                            const WeightScheme& weights, const Penalty& penalty,
                            const SolverState& state, int passes) {
  PruneSolution out;
  out.model = state.model();
  if (penalty.beta_mode != BetaMode::kFixed) {
    for (std::size_t i = 0; i < out.model.beta.size(); ++i) {
      if (out.model.kept_depth[i] == 0) out.model.beta[i] = 0.0;
    }
  }
  out.train_mse =
      state.residual().squaredNorm() / static_cast<double>(problem.rows());
  out.objective = out.train_mse + total_penalty(weights, penalty, state);
  out.size = measure(problem, out.model);
  out.passes = passes;
  return out;
}

PruneSolution solve(const PruneProblem& problem, const WeightScheme& weights,
                    const Penalty& penalty, SolverState& state,
                    const SolverOptions& options) {
  check_state(problem, state);
  state.refresh(problem);
  Engine engine(problem, weights, penalty, state, options);
  engine.solve();
  return make_solution(problem, weights, penalty, state, engine.passes());
}

}  // namespace

SolverState SolverState::zeros(const PruneProblem& problem) {
  SolverState s;
  s.kept_.assign(at(problem.size()), 0);
  s.beta_.assign(at(problem.size()), 1.0);
  s.residual_ = problem.target();
  return s;
}

SolverState SolverState::from_model(const PruneProblem& problem,
                                    const PrunedModel& model) {
  if (model.kept_depth.size() != at(problem.size()) ||
      model.beta.size() != at(problem.size())) {
    throw std::invalid_argument("pruned model does not match the problem size");
  }
  SolverState s;
  s.kept_ = model.kept_depth;
  s.beta_ = model.beta;
  for (int k : s.kept_) {
    if (k < 0 || k > problem.depth()) {
      throw std::invalid_argument("kept depth outside [0, d]");
    }
  }
  s.refresh(problem);
  return s;
}

bool SolverState::in_support(int i) const {
  return kept_[at(i)] > 0 && beta_[at(i)] != 0.0;
}

Index SolverState::set_block(const PruneProblem& problem, int tree,
                             int kept_depth, double beta) {
  if (kept_depth < 0 || kept_depth > problem.depth()) {
    throw std::invalid_argument("kept depth outside [0, d]");
  }
  const auto& D = problem.block(tree);
  const int k_old = std::min(kept_[at(tree)], D.path_depth());
  const int k_new = std::min(kept_depth, D.path_depth());
  const double g = problem.gamma();
  const double b_old = beta_[at(tree)];
  Index touched = 0;
  for (int l = 0; l < std::max(k_old, k_new); ++l) {
    const double coef = g * ((l < k_old ? b_old : 0.0) - (l < k_new ? beta : 0.0));
    if (coef != 0.0) {
      residual_.noalias() += coef * D.values().col(l);
      ++touched;
    }
  }
  kept_[at(tree)] = kept_depth;
  beta_[at(tree)] = beta;
  return touched;
}

void SolverState::refresh(const PruneProblem& problem) {
  residual_ = problem.target();
  for (int i = 0; i < size(); ++i) {
    if (kept_[at(i)] > 0 && beta_[at(i)] != 0.0) {
      residual_ -= beta_[at(i)] * problem.contribution(i, kept_[at(i)]);
    }
  }
}

double objective(const PruneProblem& problem, const WeightScheme& weights,
                 const SolverState& state, const Penalty& penalty) {
  check_shapes(problem, weights);
  check_state(problem, state);
  Vector r = problem.target();
  for (int i = 0; i < state.size(); ++i) {
    const int k = state.kept_depth()[at(i)];
    const double b =
        penalty.beta_mode == BetaMode::kFixed ? 1.0 : state.beta()[at(i)];
    if (k > 0 && b != 0.0) r -= b * problem.contribution(i, k);
  }
  return r.squaredNorm() / static_cast<double>(problem.rows()) +
         total_penalty(weights, penalty, state);
}

ModelSize measure(const PruneProblem& problem, const PrunedModel& model) {
  if (model.kept_depth.size() != at(problem.size())) {
    throw std::invalid_argument("pruned model does not match the problem size");
  }
  ModelSize size;
  for (int i = 0; i < problem.size(); ++i) {
    const int kept = model.kept_depth[at(i)];
    if (kept == 0 || model.beta[at(i)] == 0.0) continue;
    const auto& counts = problem.layer_counts()[at(i)];
    Index layers = 0;
    for (int l = 0; l < std::min<int>(kept, static_cast<int>(counts.size())); ++l) {
      if (counts[at(l)] == 0) break;
      ++layers;
      size.nodes += counts[at(l)];
    }
    if (layers == 0) continue;
    ++size.trees;
    size.layers += layers;
  }
  if (size.trees > 0) {
    size.mean_depth =
        static_cast<double>(size.layers) / static_cast<double>(size.trees);
  }
  return size;
}

int block_update(const PruneProblem& problem, const WeightScheme& weights,
                 double alpha, SolverState& state, int tree) {
  const SolverOptions options;
  Engine engine(problem, weights, Penalty{alpha, BetaMode::kFixed, 0.0}, state,
                options);
  engine.update(tree);
  return state.kept_depth()[at(tree)];
}

std::pair<int, double> joint_block_update(const PruneProblem& problem,
                                          const WeightScheme& weights,
                                          const Penalty& penalty,
                                          SolverState& state, int tree) {
  if (penalty.beta_mode == BetaMode::kFixed) {
    throw std::invalid_argument("joint_block_update needs rho = 0 or 2");
  }
  const SolverOptions options;
  Engine engine(problem, weights, penalty, state, options);
  engine.update(tree);
  return {state.kept_depth()[at(tree)], state.beta()[at(tree)]};
}

PruneSolution cbcd_solve(const PruneProblem& problem,
                         const WeightScheme& weights, double alpha,
                         SolverState init, const SolverOptions& options) {
  return solve(problem, weights, Penalty{alpha, BetaMode::kFixed, 0.0}, init,
               options);
}

PruneSolution joint_solve(const PruneProblem& problem,
                          const WeightScheme& weights, const Penalty& penalty,
                          SolverState init, const SolverOptions& options) {
  if (penalty.beta_mode == BetaMode::kFixed) {
    throw std::invalid_argument("joint_solve needs rho = 0 or 2");
  }
  return solve(problem, weights, penalty, init, options);
}

bool local_search_step(const PruneProblem& problem, const WeightScheme& weights,
                       const Penalty& penalty, SolverState& state,
                       const SolverOptions& options, std::mt19937_64& rng) {
  Engine engine(problem, weights, penalty, state, options);
  std::vector<int> support;
  for (int i = 0; i < state.size(); ++i) {
    if (state.in_support(i)) support.push_back(i);
  }
  if (support.empty() || static_cast<int>(support.size()) == problem.size()) {
    return false;
  }
  std::uniform_int_distribution<std::size_t> pick(0, support.size() - 1);
  return engine.try_swap(support[pick(rng)]);
}

int select_swap_in(const PruneProblem& problem, const SolverState& state,
                   SearchRule rule, bool correlate_with_response) {
  if (rule == SearchRule::kNone) return -1;
  int best = -1;
  double best_corr = -1.0;
  const Vector& reference =
      correlate_with_response ? problem.target() : state.residual();
  for (int i = 0; i < problem.size(); ++i) {
    if (state.in_support(i)) continue;
    if (rule == SearchRule::kSmallestIndex) {
      if (best < 0 || problem.search_rank(i) < problem.search_rank(best)) best = i;
      continue;
    }
    const double c = std::abs(correlation(problem.full_prediction(i), reference));
    if (best < 0 || c > best_corr ||
        (c == best_corr && problem.search_rank(i) < problem.search_rank(best))) {
      best = i;
      best_corr = c;
    }
  }
  return best;
}

double alpha_max(const PruneProblem& problem, const WeightScheme& weights) {
  check_shapes(problem, weights);
  if (weights.normalization() <= 0.0 || weights.weights().sum() <= 0.0) {
    throw std::invalid_argument("degenerate weight scheme: all weights are zero");
  }
  const double m = static_cast<double>(problem.rows());
  const double g = problem.gamma();
  const double K = weights.normalization();
  double best = 0.0;
  for (int i = 0; i < problem.size(); ++i) {
    const auto& D = problem.block(i);
    const int pd = D.path_depth();
    const Vector h = D.values().leftCols(pd).transpose() * problem.target();
    const Vector& q = problem.prefix_norms(i);
    double s = 0.0;
    for (int k = 1; k <= pd; ++k) {
      s += h(k - 1);
      const double w = weights.kept_weight(i, k);
      if (w <= 0.0) continue;
      const double improvement = (2.0 * g * s - g * g * q(k)) / m;
      best = std::max(best, improvement * K / w);
    }
  }
  return std::max(best, kAlphaFloor);
}

int PathResult::total_passes() const {
  int total = 0;
  for (const auto& p : points) total += p.solution.passes;
  return total;
}

std::vector<double> alpha_grid(double alpha_max, int grid_size,
                               double min_ratio) {
  if (grid_size < 2) throw std::invalid_argument("grid_size must be >= 2");
  if (!(min_ratio > 0.0 && min_ratio < 1.0)) {
    throw std::invalid_argument("min_ratio must lie in (0, 1)");
  }
  std::vector<double> grid(at(grid_size));
  for (int j = 0; j < grid_size; ++j) {
    grid[at(j)] = alpha_max * std::pow(min_ratio, static_cast<double>(j) /
                                                      (grid_size - 1));
  }
  // Just above the boundary so the first solution is exactly empty.
  grid.front() = alpha_max * (1.0 + 1e-9);
  return grid;
}

PathResult regularization_path(const PruneProblem& problem,
                               const WeightScheme& weights,
                               const PathOptions& options) {
  const auto grid =
      alpha_grid(alpha_max(problem, weights), options.grid_size, options.min_ratio);
  PathResult result;
  SolverState state = SolverState::zeros(problem);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (!options.warm_start) state = SolverState::zeros(problem);
    SolverOptions solver = options.solver;
    solver.seed = options.solver.seed + j;
    PathPoint point;
    point.alpha = grid[j];
    point.solution =
        solve(problem, weights, Penalty{grid[j], BetaMode::kFixed, 0.0}, state,
              solver);
    result.points.push_back(std::move(point));
  }
  return result;
}

void attach_validation(PathResult& path, const Ensemble& e, const Matrix& X,
                       const Vector& y) {
  for (auto& point : path.points) {
    point.valid_mse =
        mean_squared_error(predict_ensemble(e, X, point.solution.model), y);
  }
}

PruneSolution exhaustive_oracle(const PruneProblem& problem,
                                const WeightScheme& weights, double alpha) {
  check_shapes(problem, weights);
  const int n = problem.size();
  const int d = problem.depth();
  if (std::pow(static_cast<double>(d + 1), n) > kOracleLimit) {
    throw std::invalid_argument("instance too large for exhaustive enumeration");
  }
  std::vector<std::vector<Vector>> prefix(at(n));
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k <= d; ++k) prefix[at(i)].push_back(problem.contribution(i, k));
  }
  const double m = static_cast<double>(problem.rows());
  std::vector<int> kept(at(n), 0);
  std::vector<int> best_kept = kept;
  double best = std::numeric_limits<double>::infinity();
  Vector r(problem.rows());
  while (true) {
    r = problem.target();
    double pen = 0.0;
    for (int i = 0; i < n; ++i) {
      r -= prefix[at(i)][at(kept[at(i)])];
      pen += layer_penalty(weights, alpha, i, kept[at(i)]);
    }
    const double value = r.squaredNorm() / m + pen;
    if (value < best) {
      best = value;
      best_kept = kept;
    }
    int i = 0;
    while (i < n && kept[at(i)] == d) kept[at(i++)] = 0;
    if (i == n) break;
    ++kept[at(i)];
  }
  PrunedModel model{best_kept, std::vector<double>(at(n), 1.0)};
  SolverState state = SolverState::from_model(problem, model);
  return make_solution(problem, weights, Penalty{alpha, BetaMode::kFixed, 0.0},
                       state, 0);
}

}  // namespace forestprune
