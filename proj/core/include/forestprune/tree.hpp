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
#include <vector>

#include "forestprune/common.hpp"
#include "forestprune/dataset.hpp"

namespace forestprune {

struct Node {
  // -1 marks a leaf.
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  // Mean of the training responses routed to this node.
  double mu = 0.0;
  // Training sum of squared errors around mu, used by cost-complexity pruning.
  double sse = 0.0;
  Index n_samples = 0;
  // Root has depth 0; its split produces layer 1.
  int depth = 0;

  bool is_leaf() const { return feature < 0; }
};

// Binary CART regression tree stored as a flat node array, root at index 0.
// Immutable once built.
class RegressionTree {
 public:
  RegressionTree() = default;
  // Validates structure: binary internal nodes, consistent depths, child
  // sample counts summing to the parent's.
  RegressionTree(std::vector<Node> nodes, int n_features);

  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  const Node& root() const { return nodes_.front(); }
  int n_features() const { return n_features_; }
  bool empty() const { return nodes_.empty(); }

  // Deepest node depth (0 for a single leaf).
  int depth() const { return depth_; }
  // Number of nodes excluding the root, i.e. the sum of all layer counts.
  Index node_count() const;
  Index leaf_count() const;

  // Prediction of the tree truncated to `keep_depth` layers, without
  // materializing the truncated tree.
  template <typename Row>
  double predict_row(const Row& x, int keep_depth) const {
    int i = 0;
    while (!nodes_[i].is_leaf() && nodes_[i].depth < keep_depth) {
      const Node& n = nodes_[i];
      i = x(n.feature) <= n.threshold ? n.left : n.right;
    }
    return nodes_[i].mu;
  }

  template <typename Row>
  double predict_row(const Row& x) const {
    return predict_row(x, depth_);
  }

 private:
  std::vector<Node> nodes_;
  int n_features_ = 0;
  int depth_ = 0;
};

struct TreeParams {
  int max_depth = 6;
  int min_leaf = 1;
  // Features examined per split; 0 means all p.
  int feature_subsample = 0;
  std::uint64_t seed = 0;
};

// Greedy variance-reduction CART on the given rows (duplicates allowed, as in
// a bootstrap sample). Candidate thresholds are midpoints of consecutive
// distinct sorted values; equal gains resolve to the lowest feature index,
// then the lowest threshold.
RegressionTree fit_tree(const Matrix& X, const Vector& y,
                        std::span<const Index> rows, const TreeParams& params);

RegressionTree fit_tree(const Dataset& data, int max_depth, int min_leaf,
                        int feature_subsample, std::uint64_t seed);

Vector predict_tree(const RegressionTree& tree, const Matrix& X);

RegressionTree truncate_tree(const RegressionTree& tree, int keep_depth);

// Minimal cost-complexity (weakest-link) pruning. The cost of a subtree is
// its training SSE divided by the root sample count, so ccp_alpha is on the
// scale of a mean squared error. Collapses the internal node with the smallest
// per-leaf cost increase while that increase is <= ccp_alpha; ties go to the
// lowest node index.
RegressionTree ccp_prune(const RegressionTree& tree, double ccp_alpha);

// Effective alpha of every collapse in the weakest-link sequence, in order.
std::vector<double> ccp_path(const RegressionTree& tree);

// Element k-1 is the number of nodes at depth k, for k = 1..depth.
std::vector<Index> layer_node_counts(const RegressionTree& tree, int depth);

}  // namespace forestprune
