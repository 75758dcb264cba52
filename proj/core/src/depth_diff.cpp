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

#include "forestprune/depth_diff.hpp"

#include <string>

namespace forestprune {

PruneVector::PruneVector(int kept_depth, int depth)
    : kept_(kept_depth), depth_(depth) {
  if (depth < 0 || kept_depth < 0 || kept_depth > depth) {
    throw std::invalid_argument("kept depth " + std::to_string(kept_depth) +
                                " outside [0, " + std::to_string(depth) + "]");
  }
}

Vector PruneVector::to_dense() const {
  Vector z = Vector::Zero(depth_);
  z.head(kept_).setOnes();
  return z;
}

DepthDiffMatrix compute_depth_diff(const RegressionTree& tree, const Matrix& X,
                                   double baseline, int depth, int tree_index) {
  if (tree.empty()) throw std::invalid_argument("empty tree");
  if (X.cols() != tree.n_features()) {
    throw std::invalid_argument("compute_depth_diff: X has " +
                                std::to_string(X.cols()) +
                                " columns, tree expects " +
                                std::to_string(tree.n_features()));
  }
  if (depth < tree.depth()) {
    throw std::invalid_argument("padding depth is shallower than the tree");
  }
  Matrix values = Matrix::Zero(X.rows(), depth);
  for (Index j = 0; j < X.rows(); ++j) {
    double previous = baseline;
    int i = 0;
    while (!tree.node(i).is_leaf()) {
      const Node& split = tree.node(i);
      i = X(j, split.feature) <= split.threshold ? split.left : split.right;
      const Node& child = tree.node(i);
      values(j, child.depth - 1) = child.mu - previous;
      previous = child.mu;
    }
  }
  return DepthDiffMatrix(std::move(values), tree_index, tree.depth());
}

Vector pruned_predictions(const DepthDiffMatrix& D, PruneVector z) {
  if (z.kept_depth() > D.depth()) {
    throw std::invalid_argument("prune vector is longer than the matrix depth");
  }
  return D.values().leftCols(z.kept_depth()).rowwise().sum();
}

}  // namespace forestprune
