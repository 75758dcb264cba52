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
#include <vector>

#include "forestprune/depth_diff.hpp"
#include "forestprune/ensemble.hpp"

namespace forestprune {

// Everything the pruning solvers need about one ensemble on one training set:
// the depth-difference blocks (built with zero baseline, so kept depth 0 means
// the tree contributes nothing) and per-block caches.
class PruneProblem {
 public:
  // Depth-difference matrices for every tree of `e` on the training rows.
  // Trees are ranked for the smallest-index swap rule: boosting keeps
  // sequence order, bagging ranks by individual training SSE, ascending.
  static PruneProblem build(const Ensemble& e, const Matrix& X,
                            const Vector& y);

  // Direct construction from blocks; target is y minus the base prediction.
  // Layer counts feed weight construction and size metrics.
  static PruneProblem from_blocks(std::vector<DepthDiffMatrix> blocks,
                                  Vector target, double gamma,
                                  std::vector<std::vector<Index>> layer_counts);

  int size() const { return static_cast<int>(blocks_.size()); }
  int depth() const { return depth_; }
  Index rows() const { return target_.size(); }
  double gamma() const { return gamma_; }

  const DepthDiffMatrix& block(int i) const { return blocks_[idx(i)]; }
  const Vector& target() const { return target_; }
  std::span<const std::vector<Index>> layer_counts() const {
    return layer_counts_;
  }
  // Position of tree i in the swap order (0 = first choice).
  int search_rank(int i) const { return search_rank_[idx(i)]; }

  // D_i^T D_i restricted to the nonzero columns.
  const Matrix& gram(int i) const { return gram_[idx(i)]; }
  // Entry k is ||D_i z(k)||^2 for k = 0..path_depth.
  const Vector& prefix_norms(int i) const { return prefix_norms_[idx(i)]; }
  // D_i * 1, the full tree prediction on the training rows.
  const Vector& full_prediction(int i) const { return full_prediction_[idx(i)]; }

  // gamma * D_i z(k), for kept depth k.
  Vector contribution(int i, int kept_depth) const;

 private:
  static std::size_t idx(int i) { return static_cast<std::size_t>(i); }
  void finalize();

  std::vector<DepthDiffMatrix> blocks_;
  Vector target_;
  double gamma_ = 1.0;
  int depth_ = 0;
  std::vector<std::vector<Index>> layer_counts_;
  std::vector<int> search_rank_;
  std::vector<Matrix> gram_;
  std::vector<Vector> prefix_norms_;
  std::vector<Vector> full_prediction_;
};

}  // namespace forestprune
