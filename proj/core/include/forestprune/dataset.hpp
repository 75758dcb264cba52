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
#include <string>
#include <vector>

#include "forestprune/common.hpp"

namespace forestprune {

// Numeric regression data: X is m x p, y has length m.
struct Dataset {
  Matrix X;
  Vector y;
  std::vector<std::string> feature_names;

  Index rows() const { return X.rows(); }
  Index cols() const { return X.cols(); }

  // Throws std::invalid_argument unless m >= 1, p >= 1, shapes agree and
  // every value is finite.
  void validate() const;
};

Dataset subset_rows(const Dataset& data, std::span<const Index> rows);

struct RowSplit {
  std::vector<Index> train;
  std::vector<Index> valid;
};

// Seeded shuffle, then the last round(valid_frac * m) rows go to validation.
// valid_frac == 0 puts every row in train.
RowSplit train_valid_split(Index m, double valid_frac, std::uint64_t seed);

// Seeded k-fold partition; fold f's `valid` rows are its held-out rows.
std::vector<RowSplit> kfold_splits(Index m, int folds, std::uint64_t seed);

double mean_squared_error(const Vector& prediction, const Vector& truth);

}  // namespace forestprune
