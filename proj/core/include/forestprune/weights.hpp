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

#include <span>
#include <string_view>
#include <vector>

#include "forestprune/common.hpp"
#include "forestprune/ensemble.hpp"

namespace forestprune {

enum class Weighting { kDepth, kNode };

std::string_view to_string(Weighting w);
Weighting parse_weighting(std::string_view name);

// Diagonal layer weights w_{i,k} for every tree plus the normalization K.
class WeightScheme {
 public:
  WeightScheme() = default;
  WeightScheme(Matrix weights, double normalization);

  // n x d, entry (i, k-1) is w_{i,k}.
  const Matrix& weights() const { return weights_; }
  double normalization() const { return normalization_; }
  int size() const { return static_cast<int>(weights_.rows()); }
  int depth() const { return static_cast<int>(weights_.cols()); }

  // sum_{l <= k} w_{i,l}, the penalty mass of keeping k layers of tree i.
  double kept_weight(int tree, int kept_depth) const {
    return cumulative_(tree, kept_depth);
  }

 private:
  Matrix weights_;
  double normalization_ = 0.0;
  Matrix cumulative_;
};

// Depth weighting: w_{i,k} = 1 when layer k exists in tree i, else 0; K = n d.
// Node weighting: w_{i,k} = number of nodes in layer k of tree i; K = total
// node count.
WeightScheme make_weights(const Ensemble& e, Weighting scheme);
WeightScheme make_weights(std::span<const std::vector<Index>> layer_counts,
                          int depth, Weighting scheme);

}  // namespace forestprune
