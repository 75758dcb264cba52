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

#include "forestprune/common.hpp"
#include "forestprune/tree.hpp"

namespace forestprune {

// Kept-depth encoding of a prefix-constrained binary vector z in {0,1}^d:
// z = (1,...,1,0,...,0) with kept_depth ones. Skipping a layer cannot be
// represented.
class PruneVector {
 public:
  PruneVector(int kept_depth, int depth);

  static PruneVector zeros(int depth) { return {0, depth}; }
  static PruneVector ones(int depth) { return {depth, depth}; }

  int kept_depth() const { return kept_; }
  int depth() const { return depth_; }
  // Entry k (0-based) of the binary vector.
  bool operator[](int k) const { return k < kept_; }
  Vector to_dense() const;

  friend bool operator==(const PruneVector&, const PruneVector&) = default;

 private:
  int kept_;
  int depth_;
};

// Row j holds the layer-by-layer increments of node means along x_j's path:
// [mu_1 - baseline, mu_2 - mu_1, ..., mu_k - mu_{k-1}, 0, ..., 0], where mu_l
// is the mean of the depth-l node on the path. Row sums plus baseline
// reproduce the tree's prediction.
class DepthDiffMatrix {
 public:
  DepthDiffMatrix() = default;
  DepthDiffMatrix(Matrix values, int tree_index, int path_depth)
      : values_(std::move(values)), tree_index_(tree_index),
        path_depth_(path_depth) {}

  const Matrix& values() const { return values_; }
  Index rows() const { return values_.rows(); }
  int depth() const { return static_cast<int>(values_.cols()); }
  int tree_index() const { return tree_index_; }
  // Columns at or past this index are identically zero.
  int path_depth() const { return path_depth_; }

 private:
  Matrix values_;
  int tree_index_ = 0;
  int path_depth_ = 0;
};

// O(m * d): one root-to-leaf walk per row. `depth` pads columns to the
// ensemble-wide d and must be >= the tree's own depth.
DepthDiffMatrix compute_depth_diff(const RegressionTree& tree, const Matrix& X,
                                   double baseline, int depth,
                                   int tree_index = 0);

inline DepthDiffMatrix compute_depth_diff(const RegressionTree& tree,
                                          const Matrix& X, double baseline) {
  return compute_depth_diff(tree, X, baseline, tree.depth());
}

// D * z: the sum of the first kept_depth columns.
Vector pruned_predictions(const DepthDiffMatrix& D, PruneVector z);

}  // namespace forestprune
