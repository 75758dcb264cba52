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

#include <forestprune/forestprune.hpp>

#include "../support/fixtures.hpp"

namespace forestprune {
namespace {

TEST(Compare, EveryMethodRespectsBudget) {
  const Dataset train = fp_test::friedman(300, 1);
  const Dataset valid = fp_test::friedman(150, 2);
  const Ensemble e = fp_test::small_boosting(train, 30, 3, 3);
  CompareOptions opt;
  opt.node_budget = 60;
  opt.grid_size = 15;
  const auto results = compare_methods(e, train, valid, opt);
  ASSERT_EQ(results.size(), 5u);
  const std::vector<std::string> names{"forestprune", "trim", "lasso", "ccp", "bsts"};
  for (std::size_t j = 0; j < results.size(); ++j) {
    const MethodResult& r = results[j];
    EXPECT_EQ(r.method, names[j]);
    EXPECT_LE(r.size.nodes, 60) << r.method;
    EXPECT_EQ(measure(r.ensemble, r.model).nodes, r.size.nodes);
    EXPECT_NEAR(r.valid_mse, mean_squared_error(predict_ensemble(r.ensemble, valid.X, r.model), valid.y),
                1e-9);
    EXPECT_NEAR(r.train_mse, mean_squared_error(predict_ensemble(r.ensemble, train.X, r.model), train.y),
                1e-9);
  }
  // ForestPrune's selection covers the empty model, so it is never worse than it.
  EXPECT_LE(results[0].valid_mse, mean_squared_error(
                                      predict_ensemble(e, valid.X, PrunedModel::empty(e)), valid.y));
}

TEST(Compare, ZeroBudgetGivesEmptyModels) {
  const Dataset train = fp_test::friedman(120, 4);
  const Dataset valid = fp_test::friedman(60, 5);
  const Ensemble e = fp_test::small_boosting(train, 8, 3);
  CompareOptions opt;
  opt.node_budget = 0;
  opt.grid_size = 5;
  for (const auto& r : compare_methods(e, train, valid, opt)) {
    EXPECT_EQ(r.size.nodes, 0) << r.method;
  }
}

}  // namespace
}  // namespace forestprune
