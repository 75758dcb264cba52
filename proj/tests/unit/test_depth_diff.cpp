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
#include <numeric>

#include <forestprune/forestprune.hpp>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"

namespace forestprune {
namespace {

TEST(PruneVector, PrefixEncoding) {
  const PruneVector z(2, 4);
  EXPECT_TRUE(z[0]);
  EXPECT_TRUE(z[1]);
  EXPECT_FALSE(z[2]);
  Vector dense(4);
  dense << 1, 1, 0, 0;
  EXPECT_EQ(z.to_dense(), dense);
  EXPECT_EQ(PruneVector::ones(3).kept_depth(), 3);
  EXPECT_EQ(PruneVector::zeros(3).to_dense(), Vector::Zero(3));
  EXPECT_THROW(PruneVector(5, 4), std::invalid_argument);
  EXPECT_THROW(PruneVector(-1, 4), std::invalid_argument);
}

TEST(DepthDiff, RowSumsReproduceTruncatedTrees) {
  const Dataset d = fp_test::friedman(400, 1);
  const RegressionTree t = fit_tree(d, 6, 2, 0, 4);
  const double baseline = 0.75;
  const int depth = t.depth() + 2;
  const DepthDiffMatrix D = compute_depth_diff(t, d.X, baseline, depth, 3);
  EXPECT_EQ(D.depth(), depth);
  EXPECT_EQ(D.tree_index(), 3);
  EXPECT_EQ(D.path_depth(), t.depth());
  for (int k = 1; k <= depth; ++k) {
    const Vector oracle = predict_tree(truncate_tree(t, k), d.X);
    const Vector got = pruned_predictions(D, PruneVector(k, depth)).array() + baseline;
    EXPECT_LT((got - oracle).cwiseAbs().maxCoeff(), 1e-10) << "k=" << k;
  }
  EXPECT_EQ(pruned_predictions(D, PruneVector::zeros(depth)), Vector::Zero(d.rows()));
  EXPECT_TRUE(D.values().rightCols(depth - t.depth()).isZero(0.0));
}

TEST(DepthDiff, HandComputedIncrements) {
  // Root mean 2 splits x <= 0.5 into means 1 and 3; the right child splits
  // again at 0.75 into 2.5 and 3.5.
  std::vector<Node> nodes{
      {0, 0.5, 1, 2, 2.0, 0.0, 4, 0},  {-1, 0.0, -1, -1, 1.0, 0.0, 2, 1},
      {0, 0.75, 3, 4, 3.0, 0.0, 2, 1}, {-1, 0.0, -1, -1, 2.5, 0.0, 1, 2},
      {-1, 0.0, -1, -1, 3.5, 0.0, 1, 2}};
  const RegressionTree t(nodes, 1);
  Matrix X(3, 1);
  X << 0.2, 0.6, 0.9;
  const DepthDiffMatrix D = compute_depth_diff(t, X, 2.0);
  Matrix expected(3, 2);
  expected << -1.0, 0.0, 1.0, -0.5, 1.0, 0.5;
  EXPECT_TRUE(D.values().isApprox(expected, 1e-15));
}

TEST(DepthDiff, RootOnlyTreeIsZero) {
  const RegressionTree t({Node{-1, 0.0, -1, -1, 5.0, 0.0, 3, 0}}, 2);
  const DepthDiffMatrix D = compute_depth_diff(t, Matrix::Zero(3, 2), 0.0, 4);
  EXPECT_TRUE(D.values().isZero(0.0));
  EXPECT_EQ(D.path_depth(), 0);
}

TEST(DepthDiff, RejectsBadInputs) {
  const Dataset d = fp_test::friedman(50, 2);
  const RegressionTree t = fit_tree(d, 3, 1, 0, 0);
  EXPECT_THROW(compute_depth_diff(t, d.X, 0.0, t.depth() - 1), std::invalid_argument);
  EXPECT_THROW(compute_depth_diff(t, Matrix::Zero(4, 3), 0.0), std::invalid_argument);
  const DepthDiffMatrix D = compute_depth_diff(t, d.X, 0.0);
  EXPECT_THROW(pruned_predictions(D, PruneVector(t.depth() + 1, t.depth() + 1)), std::invalid_argument);
}

TEST(Weights, DepthAndNodeSchemes) {
  const Dataset d = fp_test::friedman(200, 3);
  const Ensemble e = fp_test::small_boosting(d, 5, 4);
  for (auto scheme : {Weighting::kDepth, Weighting::kNode}) {
    const WeightScheme w = make_weights(e, scheme);
    const auto oracle = fp_test::oracle_weights(e, scheme);
    EXPECT_DOUBLE_EQ(w.normalization(), oracle.K);
    for (int i = 0; i < e.size(); ++i) {
      double cum = 0.0;
      EXPECT_DOUBLE_EQ(w.kept_weight(i, 0), 0.0);
      for (int k = 1; k <= e.depth; ++k) {
        EXPECT_DOUBLE_EQ(w.weights()(i, k - 1), oracle.w[i][k - 1]);
        cum += oracle.w[i][k - 1];
        EXPECT_DOUBLE_EQ(w.kept_weight(i, k), cum);
      }
    }
  }
  EXPECT_DOUBLE_EQ(make_weights(e, Weighting::kNode).normalization(),
                   static_cast<double>(e.node_count()));
  EXPECT_EQ(parse_weighting(to_string(Weighting::kNode)), Weighting::kNode);
  EXPECT_THROW(parse_weighting("leaf"), std::invalid_argument);
}

TEST(Problem, BuildMatchesTruncations) {
  const Dataset d = fp_test::friedman(150, 4);
  const Ensemble e = fp_test::small_boosting(d, 6, 3);
  const PruneProblem p = PruneProblem::build(e, d.X, d.y);
  ASSERT_EQ(p.size(), 6);
  EXPECT_EQ(p.depth(), e.depth);
  EXPECT_DOUBLE_EQ(p.gamma(), e.gamma);
  EXPECT_LT((p.target() - (d.y.array() - e.base()).matrix()).cwiseAbs().maxCoeff(), 1e-15);
  const fp_test::TruncationTable table(e, d.X);
  for (int i = 0; i < p.size(); ++i) {
    for (int k = 0; k <= p.depth(); ++k) {
      EXPECT_LT((p.contribution(i, k) - e.gamma * table.at(i, k)).cwiseAbs().maxCoeff(), 1e-10);
      if (k <= p.block(i).path_depth()) {
        EXPECT_NEAR(p.prefix_norms(i)(k), table.at(i, k).squaredNorm(),
                    1e-9 * (1.0 + table.at(i, k).squaredNorm()));
      }
    }
    EXPECT_LT((p.full_prediction(i) - table.at(i, p.depth())).cwiseAbs().maxCoeff(), 1e-10);
  }
  std::vector<int> ranks;
  for (int i = 0; i < p.size(); ++i) ranks.push_back(p.search_rank(i));
  std::vector<int> expected(6);
  std::iota(expected.begin(), expected.end(), 0);
  EXPECT_EQ(ranks, expected);
}

TEST(Problem, BaggingRanksByTrainingError) {
  const Dataset d = fp_test::friedman(150, 5);
  const Ensemble e = fp_test::small_bagging(d, 6, 3);
  const PruneProblem p = PruneProblem::build(e, d.X, d.y);
  std::vector<std::pair<double, int>> sse;
  for (int i = 0; i < e.size(); ++i) {
    sse.emplace_back((predict_tree(e.trees[i], d.X) - d.y).squaredNorm(), i);
  }
  std::sort(sse.begin(), sse.end());
  for (int r = 0; r < e.size(); ++r) EXPECT_EQ(p.search_rank(sse[r].second), r);
}

}  // namespace
}  // namespace forestprune
