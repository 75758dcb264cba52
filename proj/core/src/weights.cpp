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

#include "forestprune/weights.hpp"

#include <string>

namespace forestprune {

std::string_view to_string(Weighting w) {
  return w == Weighting::kNode ? "node" : "depth";
}

Weighting parse_weighting(std::string_view name) {
  if (name == "depth") return Weighting::kDepth;
  if (name == "node") return Weighting::kNode;
  throw std::invalid_argument("unknown weighting '" + std::string(name) +
                              "' (expected depth or node)");
}

WeightScheme::WeightScheme(Matrix weights, double normalization)
    : weights_(std::move(weights)), normalization_(normalization) {
  if ((weights_.array() < 0.0).any()) {
    throw std::invalid_argument("layer weights must be nonnegative");
  }
  cumulative_ = Matrix::Zero(weights_.rows(), weights_.cols() + 1);
  for (Index k = 0; k < weights_.cols(); ++k) {
    cumulative_.col(k + 1) = cumulative_.col(k) + weights_.col(k);
  }
}

WeightScheme make_weights(std::span<const std::vector<Index>> layer_counts,
                          int depth, Weighting scheme) {
  const auto n = static_cast<Index>(layer_counts.size());
  Matrix w = Matrix::Zero(n, depth);
  for (Index i = 0; i < n; ++i) {
    const auto& counts = layer_counts[static_cast<std::size_t>(i)];
    const auto layers = std::min<Index>(depth, static_cast<Index>(counts.size()));
    for (Index k = 0; k < layers; ++k) {
      const auto c = static_cast<double>(counts[static_cast<std::size_t>(k)]);
      w(i, k) = scheme == Weighting::kNode ? c : (c > 0.0 ? 1.0 : 0.0);
    }
  }
  const double K = scheme == Weighting::kNode
                       ? w.sum()
                       : static_cast<double>(n) * static_cast<double>(depth);
  return WeightScheme(std::move(w), K);
}

WeightScheme make_weights(const Ensemble& e, Weighting scheme) {
  std::vector<std::vector<Index>> counts;
  counts.reserve(e.trees.size());
  for (const auto& tree : e.trees) counts.push_back(layer_node_counts(tree, e.depth));
  return make_weights(counts, e.depth, scheme);
}

}  // namespace forestprune
