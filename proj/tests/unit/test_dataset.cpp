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
#include <forestprune/parallel.hpp>

namespace forestprune {
namespace {

TEST(Dataset, SplitPartitionsRows) {
  const RowSplit s = train_valid_split(101, 0.2, 7);
  EXPECT_EQ(s.valid.size(), 20u);
  EXPECT_EQ(s.train.size(), 81u);
  std::set<Index> all(s.train.begin(), s.train.end());
  all.insert(s.valid.begin(), s.valid.end());
  EXPECT_EQ(all.size(), 101u);
  EXPECT_EQ(*all.rbegin(), 100);
  const RowSplit again = train_valid_split(101, 0.2, 7);
  EXPECT_EQ(again.valid, s.valid);
  EXPECT_TRUE(train_valid_split(10, 0.0, 1).valid.empty());
  EXPECT_THROW(train_valid_split(10, 1.0, 1), std::invalid_argument);
}

TEST(Dataset, KfoldCoversEachRowOnce) {
  const auto folds = kfold_splits(23, 5, 3);
  ASSERT_EQ(folds.size(), 5u);
  std::vector<int> seen(23, 0);
  for (const auto& f : folds) {
    EXPECT_EQ(f.train.size() + f.valid.size(), 23u);
    for (Index i : f.valid) ++seen[static_cast<std::size_t>(i)];
  }
  EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
  EXPECT_THROW(kfold_splits(3, 5, 0), std::invalid_argument);
  EXPECT_THROW(kfold_splits(10, 1, 0), std::invalid_argument);
}

TEST(Dataset, SubsetAndValidate) {
  const Dataset d = make_friedman1(30, 0.5, 1);
  EXPECT_NO_THROW(d.validate());
  const std::vector<Index> rows{4, 2, 4};
  const Dataset s = subset_rows(d, rows);
  ASSERT_EQ(s.rows(), 3);
  EXPECT_EQ(s.X.row(0), d.X.row(4));
  EXPECT_EQ(s.y(1), d.y(2));
  Dataset bad = d;
  bad.y(0) = std::nan("");
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad = d;
  bad.y.resize(3);
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Dataset, FriedmanResponse) {
  const Dataset d = make_friedman1(500, 0.0, 2);
  ASSERT_EQ(d.cols(), 10);
  const double pi = 3.14159265358979323846;
  for (Index i = 0; i < d.rows(); ++i) {
    const auto x = d.X.row(i);
    EXPECT_TRUE((x.array() >= 0.0).all() && (x.array() <= 1.0).all());
    const double f = 10 * std::sin(pi * x(0) * x(1)) + 20 * (x(2) - 0.5) * (x(2) - 0.5) +
                     10 * x(3) + 5 * x(4);
    EXPECT_NEAR(d.y(i), f, 1e-12);
  }
  const Dataset noisy = make_friedman1(20000, 1.0, 3);
  Vector clean(noisy.rows());
  for (Index i = 0; i < noisy.rows(); ++i) {
    const auto x = noisy.X.row(i);
    clean(i) = 10 * std::sin(pi * x(0) * x(1)) + 20 * (x(2) - 0.5) * (x(2) - 0.5) +
               10 * x(3) + 5 * x(4);
  }
  EXPECT_NEAR(mean_squared_error(clean, noisy.y), 1.0, 0.05);
}

TEST(Dataset, MeanSquaredError) {
  Vector a(3), b(3);
  a << 1, 2, 3;
  b << 1, 0, 6;
  EXPECT_DOUBLE_EQ(mean_squared_error(a, b), 13.0 / 3.0);
  EXPECT_THROW(mean_squared_error(a, Vector(2)), std::invalid_argument);
}

TEST(Parallel, CoversEveryIndexAndRethrows) {
  std::vector<int> hits(100, 0);
  parallel_for(100, [&](Index i) { hits[static_cast<std::size_t>(i)] += 1; });
  EXPECT_TRUE(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  EXPECT_GE(thread_count(), 1);
  EXPECT_THROW(parallel_for(10, [](Index i) {
                 if (i == 3) throw std::runtime_error("boom");
               }),
               std::runtime_error);
}

}  // namespace
}  // namespace forestprune
