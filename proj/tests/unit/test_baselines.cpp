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

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include <forestprune/forestprune.hpp>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"

namespace forestprune {
namespace {

TEST(Trim, BaggingReweightsRandomSubset) {
  const Dataset d = fp_test::friedman(120, 1);
  const Ensemble e = fp_test::small_bagging(d, 10, 3);
  const auto order = trim_order(e, 4);
  EXPECT_EQ(std::set<int>(order.begin(), order.end()).size(), 10u);
  const PrunedModel m = baseline_trim(e, 4, 4);
  int kept = 0;
  for (int i = 0; i < 10; ++i) {
    const bool in = std::find(order.begin(), order.begin() + 4, i) != order.begin() + 4;
    if (in) {
      ++kept;
      EXPECT_DOUBLE_EQ(m.beta[i], 2.5);
      EXPECT_GT(m.kept_depth[i], 0);
    } else {
      EXPECT_EQ(m.kept_depth[i], 0);
    }
  }
  EXPECT_EQ(kept, 4);
  // Averaging the kept trees.
  Vector avg = Vector::Zero(d.rows());
  for (int j = 0; j < 4; ++j) avg += predict_tree(e.trees[order[j]], d.X) / 4.0;
  EXPECT_LT((predict_ensemble(e, d.X, m) - avg).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(baseline_trim(e, 11, 0), std::invalid_argument);
}

TEST(Trim, BoostingKeepsPrefix) {
  const Dataset d = fp_test::friedman(120, 2);
  const Ensemble e = fp_test::small_boosting(d, 8, 3);
  const auto order = trim_order(e, 9);
  for (int i = 0; i < 8; ++i) EXPECT_EQ(order[i], i);
  const PrunedModel m = baseline_trim(e, 3, 0);
  for (int i = 0; i < 8; ++i) {
    EXPECT_EQ(m.kept_depth[i] > 0, i < 3);
    if (i < 3) EXPECT_EQ(m.beta[i], 1.0);
  }
}

TEST(Lasso, PathSatisfiesKkt) {
  const Dataset d = fp_test::friedman(150, 3);
  const Ensemble e = fp_test::small_boosting(d, 10, 3);
  const Matrix C = e.gamma * tree_predictions(e, d.X);
  const Vector r = d.y.array() - e.base();
  const double lmax = lasso_lambda_max(C, r);
  EXPECT_NEAR(lmax, (2.0 * C.transpose() * r / 150.0).cwiseAbs().maxCoeff(), 1e-12);
  const auto grid = lasso_lambda_grid(lmax, 15, 1e-3);
  EXPECT_DOUBLE_EQ(grid.front(), lmax);
  const LassoPath path = lasso_prune(e, d, grid);
  ASSERT_EQ(path.betas.size(), 15u);
  EXPECT_LT(path.betas.front().cwiseAbs().maxCoeff(), 1e-10);
  for (std::size_t j = 0; j < path.betas.size(); ++j) {
    EXPECT_LT(path.kkt_violation[j], 1e-6);
    EXPECT_NEAR(path.kkt_violation[j], lasso_kkt_violation(C, r, path.betas[j], grid[j]), 1e-12);
  }
  EXPECT_GT((path.betas.back().array() != 0.0).count(), 3);
}

TEST(Lasso, KktDetectsSuboptimalPoint) {
  Matrix C(4, 1);
  C << 1, 1, 1, 1;
  Vector r(4);
  r << 1, 1, 1, 1;
  // Optimum of (1/4)(4)(1-b)^2 + lambda|b| with lambda = 0.5 is b = 0.75.
  const std::vector<double> lam{0.5};
  const LassoPath p = lasso_path(C, r, lam);
  EXPECT_NEAR(p.betas[0](0), 0.75, 1e-9);
  EXPECT_GT(lasso_kkt_violation(C, r, Vector::Ones(1), 0.5), 0.1);
  const std::vector<double> bad{0.1, 0.5};
  EXPECT_THROW(lasso_path(C, r, bad), std::invalid_argument);
}

TEST(Ccp, SweepPrunesEveryTree) {
  const Dataset d = fp_test::friedman(200, 4);
  const Ensemble e = fp_test::small_boosting(d, 5, 5);
  const auto alphas = ccp_alphas(e);
  ASSERT_FALSE(alphas.empty());
  EXPECT_TRUE(std::is_sorted(alphas.begin(), alphas.end()));
  EXPECT_TRUE(std::adjacent_find(alphas.begin(), alphas.end()) == alphas.end());
  const Ensemble mid = ccp_sweep(e, alphas[alphas.size() / 2]);
  EXPECT_LT(mid.node_count(), e.node_count());
  for (int i = 0; i < e.size(); ++i) {
    const RegressionTree direct = ccp_prune(e.trees[i], alphas[alphas.size() / 2]);
    EXPECT_EQ(mid.trees[i].node_count(), direct.node_count());
  }
  EXPECT_EQ(ccp_sweep(e, alphas.back()).node_count(), 0);
  EXPECT_EQ(ccp_sweep(e, 0.0).node_count(), e.node_count());
}

TEST(Bsts, ExactMatchesBruteForce) {
  const Dataset d = fp_test::friedman(150, 5);
  const Ensemble e = fp_test::small_boosting(d, 8, 2);
  const Index budget = 12;
  const BstsResult res = bsts(e, d, budget, BstsMode::kExact);
  EXPECT_LE(res.nodes, budget);
  const Matrix C = e.gamma * tree_predictions(e, d.X);
  const Vector r = d.y.array() - e.base();
  double best = r.squaredNorm() / 150.0;
  for (unsigned mask = 1; mask < 256; ++mask) {
    std::vector<Index> support;
    Index nodes = 0;
    for (int i = 0; i < 8; ++i) {
      if (mask & (1u << i)) {
        support.push_back(i);
        nodes += e.trees[i].node_count();
      }
    }
    if (nodes <= budget) best = std::min(best, fp_test::subset_ls_loss(C, r, support));
  }
  EXPECT_NEAR(res.objective, best, 1e-9);
  const PrunedModel m = res.model(e);
  EXPECT_NEAR(mean_squared_error(predict_ensemble(e, d.X, m), d.y), res.objective, 1e-9);
  EXPECT_EQ(measure(e, m).nodes, res.nodes);
}

TEST(Bsts, HeuristicRespectsBudget) {
  const Dataset d = fp_test::friedman(150, 6);
  const Ensemble e = fp_test::small_boosting(d, 30, 3);
  const BstsResult h = bsts(e, d, 40, BstsMode::kHeuristic);
  EXPECT_LE(h.nodes, 40);
  EXPECT_LE(h.objective, (d.y.array() - e.base()).square().mean());
  const BstsResult x = bsts(e, d, 40, BstsMode::kExact, 12);
  for (int i : x.selected) EXPECT_LT(i, 12);
  EXPECT_THROW(bsts(e, d, 40, BstsMode::kExact), std::invalid_argument);
  EXPECT_THROW(bsts(e, d, -1, BstsMode::kHeuristic), std::invalid_argument);
}

}  // namespace
}  // namespace forestprune
