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

#include "forestprune/tree.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>

namespace forestprune {

RegressionTree::RegressionTree(std::vector<Node> nodes, int n_features)
    : nodes_(std::move(nodes)), n_features_(n_features) {
  if (nodes_.empty()) throw std::invalid_argument("tree has no nodes");
  if (nodes_.front().depth != 0) {
    throw std::invalid_argument("root node must have depth 0");
  }
  const int n = static_cast<int>(nodes_.size());
  for (const Node& node : nodes_) {
    depth_ = std::max(depth_, node.depth);
    if (node.is_leaf()) continue;
    if (node.feature >= n_features_) {
      throw std::invalid_argument("split feature out of range");
    }
    if (node.left <= 0 || node.left >= n || node.right <= 0 || node.right >= n) {
      throw std::invalid_argument("internal node needs two valid children");
    }
    const Node& l = nodes_[static_cast<std::size_t>(node.left)];
    const Node& r = nodes_[static_cast<std::size_t>(node.right)];
    if (l.depth != node.depth + 1 || r.depth != node.depth + 1) {
      throw std::invalid_argument("child depth must be parent depth + 1");
    }
    if (l.n_samples + r.n_samples != node.n_samples) {
      throw std::invalid_argument("child sample counts must sum to parent's");
    }
  }
}

Index RegressionTree::node_count() const {
  return nodes_.empty() ? 0 : static_cast<Index>(nodes_.size()) - 1;
}

Index RegressionTree::leaf_count() const {
  return std::count_if(nodes_.begin(), nodes_.end(),
                       [](const Node& n) { return n.is_leaf(); });
}

namespace {

struct SplitCandidate {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
};

bool better(const SplitCandidate& a, const SplitCandidate& b) {
  if (a.gain != b.gain) return a.gain > b.gain;
  if (a.feature != b.feature) return a.feature < b.feature;
  return a.threshold < b.threshold;
}

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& X, const Vector& y, const TreeParams& params)
      : X_(X), y_(y), params_(params), rng_(params.seed) {
    const int p = static_cast<int>(X.cols());
    features_per_split_ =
        params.feature_subsample <= 0 ? p : std::min(params.feature_subsample, p);
    feature_order_.resize(static_cast<std::size_t>(p));
    std::iota(feature_order_.begin(), feature_order_.end(), 0);
  }

  std::vector<Node> build(std::vector<Index> rows) {
    rows_ = std::move(rows);
    grow(0, rows_.size(), 0);
    return std::move(nodes_);
  }

 private:
  int grow(std::size_t begin, std::size_t end, int depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    const auto n = static_cast<Index>(end - begin);

    double sum = 0.0;
    for (std::size_t r = begin; r < end; ++r) sum += y_(rows_[r]);
    const double mu = sum / static_cast<double>(n);
    double sse = 0.0;
    for (std::size_t r = begin; r < end; ++r) {
      const double e = y_(rows_[r]) - mu;
      sse += e * e;
    }
    {
      Node& node = nodes_.back();
      node.mu = mu;
      node.sse = sse;
      node.n_samples = n;
      node.depth = depth;
    }

    if (depth >= params_.max_depth || n < 2 * params_.min_leaf || sse <= 0.0) {
      return id;
    }
    const SplitCandidate best = find_split(begin, end, mu);
    if (best.feature < 0 || !(best.gain > 1e-12 * sse)) return id;

    const auto mid = std::stable_partition(
        rows_.begin() + static_cast<std::ptrdiff_t>(begin),
        rows_.begin() + static_cast<std::ptrdiff_t>(end), [&](Index r) {
          return X_(r, best.feature) <= best.threshold;
        });
    const auto split = static_cast<std::size_t>(mid - rows_.begin());

    const int left = grow(begin, split, depth + 1);
    const int right = grow(split, end, depth + 1);
    Node& node = nodes_[static_cast<std::size_t>(id)];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.left = left;
    node.right = right;
    return id;
  }

  SplitCandidate find_split(std::size_t begin, std::size_t end, double mu) {
    const int p = static_cast<int>(feature_order_.size());
    if (features_per_split_ < p) {
      std::shuffle(feature_order_.begin(), feature_order_.end(), rng_);
    }
    SplitCandidate best;
    int examined = 0;
    for (int f : feature_order_) {
      if (examined >= features_per_split_) break;
      load_sorted(begin, end, f, mu);
      if (sorted_.front().first == sorted_.back().first) continue;
      ++examined;
      scan_feature(f, best);
    }
    return best;
  }

  void load_sorted(std::size_t begin, std::size_t end, int f, double mu) {
    sorted_.clear();
    for (std::size_t r = begin; r < end; ++r) {
      sorted_.emplace_back(X_(rows_[r], f), y_(rows_[r]) - mu);
    }
    std::sort(sorted_.begin(), sorted_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
  }

  // With responses centered on the node mean, the SSE reduction of a split is
  // S_L^2 n / (n_L n_R) where S_L is the centered left sum.
  void scan_feature(int f, SplitCandidate& best) const {
    const auto n = static_cast<Index>(sorted_.size());
    const Index min_leaf = params_.min_leaf;
    double left_sum = 0.0;
    for (Index i = 0; i + 1 < n; ++i) {
      left_sum += sorted_[static_cast<std::size_t>(i)].second;
      const double lo = sorted_[static_cast<std::size_t>(i)].first;
      const double hi = sorted_[static_cast<std::size_t>(i + 1)].first;
      if (lo == hi) continue;
      const Index n_left = i + 1;
      const Index n_right = n - n_left;
      if (n_left < min_leaf || n_right < min_leaf) continue;
      SplitCandidate c;
      c.gain = left_sum * left_sum * static_cast<double>(n) /
               (static_cast<double>(n_left) * static_cast<double>(n_right));
      c.feature = f;
      c.threshold = lo + (hi - lo) / 2.0;
      if (c.threshold >= hi) c.threshold = lo;
      if (best.feature < 0 || better(c, best)) best = c;
    }
  }

  const Matrix& X_;
  const Vector& y_;
  TreeParams params_;
  std::mt19937_64 rng_;
  int features_per_split_ = 0;
  std::vector<int> feature_order_;
  std::vector<Index> rows_;
  std::vector<Node> nodes_;
  std::vector<std::pair<double, double>> sorted_;
};

// Copies the subtree reachable from the root, turning every node for which
// `collapse` holds into a leaf. Preserves pre-order numbering.
RegressionTree rebuild(const RegressionTree& tree,
                       const std::function<bool(int)>& collapse) {
  std::vector<Node> out;
  out.reserve(tree.nodes().size());
  std::function<int(int)> copy = [&](int i) -> int {
    const int id = static_cast<int>(out.size());
    out.push_back(tree.node(i));
    const Node& src = tree.node(i);
    if (src.is_leaf() || collapse(i)) {
      Node& leaf = out.back();
      leaf.feature = -1;
      leaf.threshold = 0.0;
      leaf.left = -1;
      leaf.right = -1;
      return id;
    }
    const int left = copy(src.left);
    const int right = copy(src.right);
    out[static_cast<std::size_t>(id)].left = left;
    out[static_cast<std::size_t>(id)].right = right;
    return id;
  };
  copy(0);
  return RegressionTree(std::move(out), tree.n_features());
}

void check_params(int max_depth, int min_leaf, int feature_subsample, Index p) {
  if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
  if (min_leaf < 1) throw std::invalid_argument("min_leaf must be >= 1");
  if (feature_subsample < 0 || feature_subsample > p) {
    throw std::invalid_argument("feature_subsample must lie in [1, p]");
  }
}

}  // namespace

RegressionTree fit_tree(const Matrix& X, const Vector& y,
                        std::span<const Index> rows, const TreeParams& params) {
  if (rows.empty() || X.rows() == 0) {
    throw std::invalid_argument("cannot fit a tree on an empty dataset");
  }
  if (X.cols() < 1) throw std::invalid_argument("dataset has no features");
  if (y.size() != X.rows()) {
    throw std::invalid_argument("response length does not match row count");
  }
  check_params(params.max_depth, params.min_leaf, params.feature_subsample,
               X.cols());
  TreeBuilder builder(X, y, params);
  return RegressionTree(builder.build({rows.begin(), rows.end()}),
                        static_cast<int>(X.cols()));
}

RegressionTree fit_tree(const Dataset& data, int max_depth, int min_leaf,
                        int feature_subsample, std::uint64_t seed) {
  if (data.rows() == 0) {
    throw std::invalid_argument("cannot fit a tree on an empty dataset");
  }
  std::vector<Index> rows(static_cast<std::size_t>(data.rows()));
  std::iota(rows.begin(), rows.end(), Index{0});
  TreeParams params{max_depth, min_leaf, feature_subsample, seed};
  return fit_tree(data.X, data.y, rows, params);
}

Vector predict_tree(const RegressionTree& tree, const Matrix& X) {
  if (tree.empty()) throw std::invalid_argument("predict on an empty tree");
  if (X.cols() != tree.n_features()) {
    throw std::invalid_argument(
        "predict_tree: X has " + std::to_string(X.cols()) +
        " columns, tree expects " + std::to_string(tree.n_features()));
  }
  Vector out(X.rows());
  for (Index j = 0; j < X.rows(); ++j) out(j) = tree.predict_row(X.row(j));
  return out;
}

RegressionTree truncate_tree(const RegressionTree& tree, int keep_depth) {
  if (keep_depth < 0) throw std::invalid_argument("keep_depth must be >= 0");
  if (keep_depth >= tree.depth()) return tree;
  return rebuild(tree, [&](int i) { return tree.node(i).depth >= keep_depth; });
}

namespace {

// Weakest-link collapse sequence: node ids in collapse order with their
// effective alphas.
std::vector<std::pair<int, double>> weakest_link_sequence(
    const RegressionTree& tree, double stop_above) {
  const auto& nodes = tree.nodes();
  const auto n = nodes.size();
  const double scale = 1.0 / static_cast<double>(tree.root().n_samples);

  std::vector<int> parent(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (!nodes[i].is_leaf()) {
      parent[static_cast<std::size_t>(nodes[i].left)] = static_cast<int>(i);
      parent[static_cast<std::size_t>(nodes[i].right)] = static_cast<int>(i);
    }
  }
  // Subtree risk and leaf count, children before parents (pre-order ids).
  std::vector<double> subtree_risk(n, 0.0);
  std::vector<Index> leaves(n, 0);
  for (std::size_t k = n; k-- > 0;) {
    const Node& node = nodes[k];
    if (node.is_leaf()) {
      subtree_risk[k] = node.sse * scale;
      leaves[k] = 1;
    } else {
      const auto l = static_cast<std::size_t>(node.left);
      const auto r = static_cast<std::size_t>(node.right);
      subtree_risk[k] = subtree_risk[l] + subtree_risk[r];
      leaves[k] = leaves[l] + leaves[r];
    }
  }
  auto link_strength = [&](std::size_t k) {
    return (nodes[k].sse * scale - subtree_risk[k]) /
           static_cast<double>(leaves[k] - 1);
  };

  std::set<std::pair<double, int>> live;
  std::vector<double> key(n, 0.0);
  std::vector<bool> removed(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    if (!nodes[k].is_leaf()) {
      key[k] = link_strength(k);
      live.emplace(key[k], static_cast<int>(k));
    }
  }

  std::vector<std::pair<int, double>> sequence;
  while (!live.empty()) {
    const auto [g, id] = *live.begin();
    if (g > stop_above) break;
    sequence.emplace_back(id, g);

    // Drop the collapsed node and every live descendant.
    std::vector<int> stack{id};
    while (!stack.empty()) {
      const auto k = static_cast<std::size_t>(stack.back());
      stack.pop_back();
      if (nodes[k].is_leaf() || removed[k]) continue;
      removed[k] = true;
      live.erase({key[k], static_cast<int>(k)});
      stack.push_back(nodes[k].left);
      stack.push_back(nodes[k].right);
    }
    const auto c = static_cast<std::size_t>(id);
    const double risk_increase = nodes[c].sse * scale - subtree_risk[c];
    const Index leaves_lost = leaves[c] - 1;
    subtree_risk[c] = nodes[c].sse * scale;
    leaves[c] = 1;
    for (int a = parent[c]; a >= 0; a = parent[static_cast<std::size_t>(a)]) {
      const auto ak = static_cast<std::size_t>(a);
      live.erase({key[ak], a});
      subtree_risk[ak] += risk_increase;
      leaves[ak] -= leaves_lost;
      key[ak] = link_strength(ak);
      live.emplace(key[ak], a);
    }
  }
  return sequence;
}

}  // namespace

RegressionTree ccp_prune(const RegressionTree& tree, double ccp_alpha) {
  if (!(ccp_alpha >= 0.0)) throw std::invalid_argument("ccp_alpha must be >= 0");
  if (ccp_alpha == 0.0 || tree.depth() == 0) return tree;
  const auto sequence = weakest_link_sequence(tree, ccp_alpha);
  std::vector<bool> collapsed(tree.nodes().size(), false);
  for (const auto& [id, g] : sequence) {
    collapsed[static_cast<std::size_t>(id)] = true;
  }
  return rebuild(tree, [&](int i) { return collapsed[static_cast<std::size_t>(i)]; });
}

std::vector<double> ccp_path(const RegressionTree& tree) {
  std::vector<double> out;
  for (const auto& [id, g] :
       weakest_link_sequence(tree, std::numeric_limits<double>::infinity())) {
    out.push_back(g);
  }
  return out;
}

std::vector<Index> layer_node_counts(const RegressionTree& tree, int depth) {
  if (depth < 0) throw std::invalid_argument("depth must be >= 0");
  std::vector<Index> counts(static_cast<std::size_t>(depth), 0);
  for (const Node& node : tree.nodes()) {
    if (node.depth >= 1 && node.depth <= depth) {
      ++counts[static_cast<std::size_t>(node.depth - 1)];
    }
  }
  return counts;
}

}  // namespace forestprune
