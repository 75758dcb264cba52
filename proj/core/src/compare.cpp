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

#include "forestprune/compare.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "forestprune/polish.hpp"
#include "forestprune/problem.hpp"

namespace forestprune {

namespace {

std::string describe(const char* name, double value) {
  std::ostringstream s;
  s << name << '=' << value;
  return s.str();
}

class Selector {
 public:
  Selector(std::string method, const Dataset& train, const Dataset& valid,
           Index budget)
      : train_(train), valid_(valid), budget_(budget) {
    best_.method = std::move(method);
  }

  void offer(const Ensemble& e, const PrunedModel& model, std::string setting) {
    const ModelSize size = measure(e, model);
    if (size.nodes > budget_) return;
    const double v = mean_squared_error(predict_ensemble(e, valid_.X, model), valid_.y);
    if (found_ && v >= best_.valid_mse) return;
    found_ = true;
    best_.setting = std::move(setting);
    best_.ensemble = e;
    best_.model = model;
    best_.size = size;
    best_.valid_mse = v;
  }

  MethodResult finish(const Ensemble& e) {
    if (!found_) {
      best_.setting = "empty";
      best_.ensemble = e;
      best_.model = PrunedModel::empty(e);
      best_.size = ModelSize{};
      best_.valid_mse = mean_squared_error(
          predict_ensemble(e, valid_.X, best_.model), valid_.y);
    }
    best_.train_mse = mean_squared_error(
        predict_ensemble(best_.ensemble, train_.X, best_.model), train_.y);
    return std::move(best_);
  }

 private:
  const Dataset& train_;
  const Dataset& valid_;
  Index budget_;
  MethodResult best_;
  bool found_ = false;
};

}  // namespace

MethodResult select_forestprune(const Ensemble& e, const Dataset& train,
                                const Dataset& valid,
                                const CompareOptions& options) {
  const PruneProblem problem = PruneProblem::build(e, train.X, train.y);
  const WeightScheme weights = make_weights(e, options.weighting);
  PathOptions po;
  po.grid_size = options.grid_size;
  po.solver.tol = options.tol;
  po.solver.rule = options.rule;
  po.solver.seed = options.seed;
  const PathResult path = regularization_path(problem, weights, po);

  Selector selector("forestprune", train, valid, options.node_budget);
  for (const auto& point : path.points) {
    const PrunedModel& model = point.solution.model;
    if (point.solution.size.nodes > options.node_budget) continue;
    selector.offer(e, model, describe("alpha", point.alpha));
    if (options.alpha2 <= 0.0) continue;
    const PolishBasis basis = PolishBasis::build(problem, model);
    if (basis.size() == 0) continue;
    const Vector beta = ridge_polish(basis, problem.target(), options.alpha2);
    selector.offer(e, apply_polish(model, basis, beta),
                   describe("alpha", point.alpha) + " +ridge");
  }
  return selector.finish(e);
}

MethodResult select_trim(const Ensemble& e, const Dataset& train,
                         const Dataset& valid, const CompareOptions& options) {
  Selector selector("trim", train, valid, options.node_budget);
  for (int keep = 1; keep <= e.size(); ++keep) {
    selector.offer(e, baseline_trim(e, keep, options.seed),
                   describe("keep", keep));
  }
  return selector.finish(e);
}

MethodResult select_lasso(const Ensemble& e, const Dataset& train,
                          const Dataset& valid, const CompareOptions& options) {
  Selector selector("lasso", train, valid, options.node_budget);
  const Matrix columns = e.gamma * tree_predictions(e, train.X);
  const Vector r = train.y.array() - e.base();
  const double lmax = lasso_lambda_max(columns, r);
  if (lmax > 0.0) {
    const auto grid = lasso_lambda_grid(lmax, options.lasso_grid);
    const LassoPath path = lasso_path(columns, r, grid);
    for (std::size_t j = 0; j < path.betas.size(); ++j) {
      PrunedModel model = PrunedModel::empty(e);
      for (int i = 0; i < e.size(); ++i) {
        const double b = path.betas[j](i);
        if (b == 0.0) continue;
        model.kept_depth[static_cast<std::size_t>(i)] = e.depth;
        model.beta[static_cast<std::size_t>(i)] = b;
      }
      selector.offer(e, model, describe("lambda", path.lambdas[j]));
    }
  }
  return selector.finish(e);
}

MethodResult select_ccp(const Ensemble& e, const Dataset& train,
                        const Dataset& valid, const CompareOptions& options) {
  Selector selector("ccp", train, valid, options.node_budget);
  std::vector<double> alphas = ccp_alphas(e);
  alphas.insert(alphas.begin(), 0.0);
  // Only alphas at or above the first budget-feasible one matter.
  std::size_t lo = 0;
  std::size_t hi = alphas.size() - 1;
  if (ccp_sweep(e, alphas[hi]).node_count() <= options.node_budget) {
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (ccp_sweep(e, alphas[mid]).node_count() <= options.node_budget) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    const std::size_t tail = alphas.size() - lo;
    const std::size_t stride = std::max<std::size_t>(1, tail / 200);
    for (std::size_t j = lo; j < alphas.size(); j += stride) {
      const Ensemble pruned = ccp_sweep(e, alphas[j]);
      selector.offer(pruned, PrunedModel::full(pruned),
                     describe("ccp_alpha", alphas[j]));
    }
  }
  return selector.finish(e);
}

MethodResult select_bsts(const Ensemble& e, const Dataset& train,
                         const Dataset& valid, const CompareOptions& options) {
  Selector selector("bsts", train, valid, options.node_budget);
  const int candidates = std::min(options.bsts_candidates, e.size());
  const BstsMode mode =
      candidates <= kBstsExactLimit ? BstsMode::kExact : BstsMode::kHeuristic;
  // Every budget up to the limit, so validation picks the subset size.
  Index last_nodes = -1;
  for (Index budget = options.node_budget; budget >= 0; --budget) {
    const BstsResult r = bsts(e, train, budget, mode, candidates);
    if (r.nodes == last_nodes) continue;
    last_nodes = r.nodes;
    selector.offer(e, r.model(e), describe("budget", static_cast<double>(budget)));
    if (r.nodes == 0) break;
    budget = std::min(budget, r.nodes);
  }
  return selector.finish(e);
}

std::vector<MethodResult> compare_methods(const Ensemble& e, const Dataset& train,
                                          const Dataset& valid,
                                          const CompareOptions& options) {
  std::vector<MethodResult> out;
  out.push_back(select_forestprune(e, train, valid, options));
  out.push_back(select_trim(e, train, valid, options));
  out.push_back(select_lasso(e, train, valid, options));
  out.push_back(select_ccp(e, train, valid, options));
  out.push_back(select_bsts(e, train, valid, options));
  return out;
}

}  // namespace forestprune
