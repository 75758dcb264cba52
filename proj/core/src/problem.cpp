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

#include "forestprune/problem.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "forestprune/parallel.hpp"

namespace forestprune {

PruneProblem PruneProblem::build(const Ensemble& e, const Matrix& X,
                                 const Vector& y) {
  if (X.rows() != y.size()) {
    throw std::invalid_argument("response length does not match row count");
  }
  if (X.rows() == 0) throw std::invalid_argument("no training rows");
  PruneProblem p;
  p.gamma_ = e.gamma;
  p.depth_ = e.depth;
  p.target_ = y.array() - e.base();
  p.blocks_.resize(e.trees.size());
  p.layer_counts_.resize(e.trees.size());
  parallel_for(e.size(), [&](Index i) {
    const auto& tree = e.trees[idx(static_cast<int>(i))];
    p.blocks_[idx(static_cast<int>(i))] =
        compute_depth_diff(tree, X, 0.0, e.depth, static_cast<int>(i));
    p.layer_counts_[idx(static_cast<int>(i))] = layer_node_counts(tree, e.depth);
  });
  p.finalize();

  std::vector<int> order(e.trees.size());
  std::iota(order.begin(), order.end(), 0);
  if (e.kind == EnsembleKind::kBagging) {
    std::vector<double> sse(e.trees.size());
    for (std::size_t i = 0; i < sse.size(); ++i) {
      sse[i] = (y - p.full_prediction_[i]).squaredNorm();
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return sse[idx(a)] < sse[idx(b)]; });
  }
  for (std::size_t r = 0; r < order.size(); ++r) {
    p.search_rank_[idx(order[r])] = static_cast<int>(r);
  }
  return p;
}

PruneProblem PruneProblem::from_blocks(
    std::vector<DepthDiffMatrix> blocks, Vector target, double gamma,
    std::vector<std::vector<Index>> layer_counts) {
  if (blocks.size() != layer_counts.size()) {
    throw std::invalid_argument("one layer-count vector per block required");
  }
  for (const auto& b : blocks) {
    if (b.rows() != target.size()) {
      throw std::invalid_argument("block row count does not match target");
    }
    if (!blocks.empty() && b.depth() != blocks.front().depth()) {
      throw std::invalid_argument("blocks must share one depth");
    }
  }
  PruneProblem p;
  p.blocks_ = std::move(blocks);
  p.target_ = std::move(target);
  p.gamma_ = gamma;
  p.depth_ = p.blocks_.empty() ? 0 : p.blocks_.front().depth();
  p.layer_counts_ = std::move(layer_counts);
  p.finalize();
  std::iota(p.search_rank_.begin(), p.search_rank_.end(), 0);
  return p;
}

void PruneProblem::finalize() {
  const auto n = blocks_.size();
  gram_.resize(n);
  prefix_norms_.resize(n);
  full_prediction_.resize(n);
  search_rank_.assign(n, 0);
  parallel_for(static_cast<Index>(n), [&](Index i) {
    const auto& D = blocks_[static_cast<std::size_t>(i)];
    const auto cols = D.values().leftCols(D.path_depth());
    Matrix G = cols.transpose() * cols;
    Vector q = Vector::Zero(D.path_depth() + 1);
    for (Index k = 1; k <= D.path_depth(); ++k) {
      q(k) = q(k - 1) + 2.0 * G.col(k - 1).head(k - 1).sum() + G(k - 1, k - 1);
    }
    gram_[static_cast<std::size_t>(i)] = std::move(G);
    prefix_norms_[static_cast<std::size_t>(i)] = std::move(q);
    full_prediction_[static_cast<std::size_t>(i)] = cols.rowwise().sum();
  });
}

Vector PruneProblem::contribution(int i, int kept_depth) const {
  const auto& D = block(i);
  const int k = std::min(kept_depth, D.path_depth());
  return gamma_ * D.values().leftCols(k).rowwise().sum();
}

}  // namespace forestprune
