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

#include <random>

#include <forestprune/forestprune.hpp>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"

namespace forestprune {
namespace {

PolishBasis random_basis(Index m, Index s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  PolishBasis b;
  b.columns = Matrix::NullaryExpr(m, s, [&] { return n(rng); });
  for (Index j = 0; j < s; ++j) b.trees.push_back(static_cast<int>(j));
  return b;
}

Vector random_response(const PolishBasis& b, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  Vector coef = Vector::NullaryExpr(b.size(), [&] { return n(rng); });
  for (Index j = 0; j < coef.size(); j += 2) coef(j) = 0.0;
  return b.columns * coef + Vector::NullaryExpr(b.columns.rows(), [&] { return n(rng); });
}

TEST(Polish, BasisHoldsKeptColumns) {
  const Dataset d = fp_test::friedman(150, 1);
  const Ensemble e = fp_test::small_boosting(d, 5, 3);
  const PruneProblem p = PruneProblem::build(e, d.X, d.y);
  PrunedModel m = PrunedModel::full(e);
  m.kept_depth = {0, 2, 3, 0, 1};
  const PolishBasis b = PolishBasis::build(p, m);
  EXPECT_EQ(b.trees, (std::vector<int>{1, 2, 4}));
  for (Index j = 0; j < b.size(); ++j) {
    const int t = b.trees[static_cast<std::size_t>(j)];
    EXPECT_LT((b.columns.col(j) - p.contribution(t, m.kept_depth[t])).cwiseAbs().maxCoeff(),
              1e-15);
  }
  const PrunedModel back = apply_polish(m, b, Vector::Constant(3, 2.0));
  EXPECT_EQ(back.kept_depth, (std::vector<int>{0, 2, 3, 0, 1}));
  EXPECT_EQ(back.beta[1], 2.0);
  EXPECT_EQ(back.beta[0], 0.0);
  Vector with_zero(3);
  with_zero << 1.0, 0.0, 1.0;
  EXPECT_EQ(apply_polish(m, b, with_zero).kept_depth[2], 0);
}

TEST(Polish, RidgeSatisfiesNormalEquations) {
  const PolishBasis b = random_basis(80, 6, 2);
  const Vector r = random_response(b, 3);
  const double m = 80.0;
  for (double a2 : {1e-3, 0.1, 10.0}) {
    const Vector beta = ridge_polish(b, r, a2);
    const Vector grad = -2.0 / m * b.columns.transpose() * (r - b.columns * beta) + 2.0 * a2 * beta;
    EXPECT_LT(grad.cwiseAbs().maxCoeff(), 1e-10);
  }
  const Vector ls = ridge_polish(b, r, 0.0);
  const Vector qr = b.columns.colPivHouseholderQr().solve(r);
  EXPECT_LT((ls - qr).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Polish, RidgeHandlesCollinearColumnsAtZeroPenalty) {
  PolishBasis b = random_basis(40, 3, 4);
  b.columns.col(2) = b.columns.col(0);
  const Vector r = random_response(b, 5);
  const Vector beta = ridge_polish(b, r, 0.0);
  EXPECT_TRUE(beta.allFinite());
  EXPECT_NEAR(beta(0), beta(2), 1e-8);
}

TEST(Polish, ObjectiveDefinition) {
  const PolishBasis b = random_basis(20, 3, 6);
  const Vector r = random_response(b, 7);
  Vector beta(3);
  beta << 1.0, 0.0, -2.0;
  const double loss = (r - b.columns * beta).squaredNorm() / 20.0;
  EXPECT_NEAR(polish_objective(b.columns, r, beta, 0.5, 2), loss + 0.5 * 5.0, 1e-12);
  EXPECT_NEAR(polish_objective(b.columns, r, beta, 0.5, 0), loss + 0.5 * 2.0, 1e-12);
  EXPECT_THROW(polish_objective(b.columns, r, beta, 0.5, 1), std::invalid_argument);
}

TEST(Polish, SubsetMatchesEnumeration) {
  int matched = 0;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const PolishBasis b = random_basis(60, 8, 100 + seed);
    const Vector r = random_response(b, 200 + seed);
    const double a2 = 0.02 * static_cast<double>(1 + seed % 5);
    const double best = fp_test::exhaustive_subset(b.columns, r, a2);
    const SubsetPolishResult res = subset_polish(b, r, a2);
    EXPECT_NEAR(res.objective, polish_objective(b.columns, r, res.beta, a2, 0), 1e-10);
    EXPECT_GE(res.objective, best - 1e-10);
    if (res.objective <= best + 1e-9) ++matched;
  }
  EXPECT_EQ(matched, 25);
}

TEST(Polish, SubsetExactMatchesEnumeration) {
  const PolishBasis b = random_basis(50, 7, 9);
  const Vector r = random_response(b, 10);
  const auto res = subset_polish_exact(b, r, 0.05);
  EXPECT_NEAR(res.objective, fp_test::exhaustive_subset(b.columns, r, 0.05), 1e-10);
  EXPECT_THROW(subset_polish_exact(random_basis(30, kExactSubsetLimit + 1, 1),
                                   Vector::Zero(30), 0.1),
               std::invalid_argument);
}

TEST(Polish, SubsetIsLeastSquaresOnSupport) {
  const PolishBasis b = random_basis(70, 6, 11);
  const Vector r = random_response(b, 12);
  const auto res = subset_polish(b, r, 0.03);
  std::vector<Index> support;
  for (Index j = 0; j < res.beta.size(); ++j) {
    if (res.beta(j) != 0.0) support.push_back(j);
  }
  Vector ls;
  fp_test::subset_ls_loss(b.columns, r, support, &ls);
  EXPECT_LT((ls - res.beta).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Polish, SubsetPathIsNested) {
  const PolishBasis b = random_basis(60, 10, 13);
  const Vector r = random_response(b, 14);
  const std::vector<double> grid{1e-3, 1e-2, 5e-2, 0.2, 50.0};
  const auto path = subset_polish_path(b, r, grid);
  ASSERT_EQ(path.size(), grid.size());
  for (std::size_t j = 1; j < path.size(); ++j) {
    for (Index c = 0; c < b.size(); ++c) {
      if (path[j].beta(c) != 0.0) EXPECT_NE(path[j - 1].beta(c), 0.0);
    }
  }
  EXPECT_EQ((path.back().beta.array() != 0.0).count(), 0);
  const std::vector<double> descending{1.0, 0.1};
  EXPECT_THROW(subset_polish_path(b, r, descending), std::invalid_argument);
}

TEST(Polish, RejectsBadInputs) {
  const PolishBasis b = random_basis(10, 2, 15);
  EXPECT_THROW(ridge_polish(b, Vector::Zero(9), 0.1), std::invalid_argument);
  EXPECT_THROW(ridge_polish(b, Vector::Zero(10), -0.1), std::invalid_argument);
  SubsetPolishOptions opt;
  opt.start = Vector::Ones(3);
  EXPECT_THROW(subset_polish(b, Vector::Zero(10), 0.1, opt), std::invalid_argument);
}

}  // namespace
}  // namespace forestprune
