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

#include "forestprune/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace forestprune {

void Dataset::validate() const {
  if (X.rows() < 1) throw std::invalid_argument("dataset has no rows");
  if (X.cols() < 1) throw std::invalid_argument("dataset has no features");
  if (y.size() != X.rows()) {
    throw std::invalid_argument("response length does not match row count");
  }
  if (!feature_names.empty() &&
      static_cast<Index>(feature_names.size()) != X.cols()) {
    throw std::invalid_argument("feature name count does not match columns");
  }
  if (!X.allFinite() || !y.allFinite()) {
    throw std::invalid_argument("dataset contains non-finite values");
  }
}

Dataset subset_rows(const Dataset& data, std::span<const Index> rows) {
  Dataset out;
  out.X.resize(static_cast<Index>(rows.size()), data.X.cols());
  out.y.resize(static_cast<Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto i = static_cast<Index>(r);
    out.X.row(i) = data.X.row(rows[r]);
    out.y(i) = data.y(rows[r]);
  }
  out.feature_names = data.feature_names;
  return out;
}

namespace {

std::vector<Index> shuffled_rows(Index m, std::uint64_t seed) {
  std::vector<Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

}  // namespace

RowSplit train_valid_split(Index m, double valid_frac, std::uint64_t seed) {
  if (valid_frac < 0.0 || valid_frac >= 1.0) {
    throw std::invalid_argument("valid_frac must lie in [0, 1)");
  }
  const auto order = shuffled_rows(m, seed);
  const auto n_valid =
      static_cast<std::size_t>(std::llround(valid_frac * static_cast<double>(m)));
  RowSplit split;
  split.train.assign(order.begin(), order.end() - static_cast<std::ptrdiff_t>(n_valid));
  split.valid.assign(order.end() - static_cast<std::ptrdiff_t>(n_valid), order.end());
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.valid.begin(), split.valid.end());
  return split;
}

std::vector<RowSplit> kfold_splits(Index m, int folds, std::uint64_t seed) {
  if (folds < 2 || folds > m) {
    throw std::invalid_argument("folds must lie in [2, rows]");
  }
  const auto order = shuffled_rows(m, seed);
  std::vector<RowSplit> out(static_cast<std::size_t>(folds));
  for (std::size_t r = 0; r < order.size(); ++r) {
    const auto fold = r % static_cast<std::size_t>(folds);
    for (std::size_t f = 0; f < out.size(); ++f) {
      (f == fold ? out[f].valid : out[f].train).push_back(order[r]);
    }
  }
  for (auto& split : out) {
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.valid.begin(), split.valid.end());
  }
  return out;
}

double mean_squared_error(const Vector& prediction, const Vector& truth) {
  if (prediction.size() != truth.size() || truth.size() == 0) {
    throw std::invalid_argument("mean_squared_error: size mismatch");
  }
  return (prediction - truth).squaredNorm() / static_cast<double>(truth.size());
}

}  // namespace forestprune
