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

#include "forestprune/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "forestprune/parallel.hpp"

namespace forestprune {

std::string_view to_string(EnsembleKind kind) {
  return kind == EnsembleKind::kBoosting ? "boosting" : "bagging";
}

EnsembleKind parse_ensemble_kind(std::string_view name) {
  if (name == "bagging") return EnsembleKind::kBagging;
  if (name == "boosting") return EnsembleKind::kBoosting;
  throw std::invalid_argument("unknown ensemble kind '" + std::string(name) +
                              "' (expected bagging or boosting)");
}

Index Ensemble::node_count() const {
  Index total = 0;
  for (const auto& t : trees) total += t.node_count();
  return total;
}

PrunedModel PrunedModel::full(const Ensemble& e) {
  return {std::vector<int>(e.trees.size(), e.depth),
          std::vector<double>(e.trees.size(), 1.0)};
}

PrunedModel PrunedModel::empty(const Ensemble& e) {
  return {std::vector<int>(e.trees.size(), 0),
          std::vector<double>(e.trees.size(), 1.0)};
}

namespace {

void check_model(const Ensemble& e, const PrunedModel& model) {
  if (model.kept_depth.size() != e.trees.size() ||
      model.beta.size() != e.trees.size()) {
    throw std::invalid_argument(
        "pruned model has " + std::to_string(model.kept_depth.size()) +
        " depths and " + std::to_string(model.beta.size()) +
        " weights for an ensemble of " + std::to_string(e.trees.size()) +
        " trees");
  }
  for (int k : model.kept_depth) {
    if (k < 0) throw std::invalid_argument("kept depth must be >= 0");
  }
}

void check_columns(const Ensemble& e, const Matrix& X) {
  if (X.cols() != e.n_features) {
    throw std::invalid_argument("X has " + std::to_string(X.cols()) +
                                " columns, ensemble expects " +
                                std::to_string(e.n_features));
  }
}

}  // namespace

ModelSize measure(const Ensemble& e, const PrunedModel& model) {
  check_model(e, model);
  ModelSize size;
  for (std::size_t i = 0; i < e.trees.size(); ++i) {
    const auto& tree = e.trees[i];
    const int k = std::min(model.kept_depth[i], tree.depth());
    if (k == 0 || model.beta[i] == 0.0) continue;
    const auto counts = layer_node_counts(tree, k);
    ++size.trees;
    size.layers += k;
    size.nodes += std::accumulate(counts.begin(), counts.end(), Index{0});
  }
  if (size.trees > 0) {
    size.mean_depth =
        static_cast<double>(size.layers) / static_cast<double>(size.trees);
  }
  return size;
}

Ensemble fit_bagging(const Dataset& data, const BaggingParams& params) {
  data.validate();
  if (params.n_trees < 1) throw std::invalid_argument("n_trees must be >= 1");
  const Index m = data.rows();
  const Index p = data.cols();
  const int features =
      params.feature_subsample > 0
          ? params.feature_subsample
          : std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(p)))));

  std::mt19937_64 master(params.seed);
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(params.n_trees));
  for (auto& s : seeds) s = master();

  Ensemble e;
  e.kind = EnsembleKind::kBagging;
  e.trees.resize(static_cast<std::size_t>(params.n_trees));
  e.gamma = 1.0 / static_cast<double>(params.n_trees);
  e.depth = params.max_depth;
  e.n_features = static_cast<int>(p);

  parallel_for(params.n_trees, [&](Index i) {
    const auto seed = seeds[static_cast<std::size_t>(i)];
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Index> draw(0, m - 1);
    std::vector<Index> rows(static_cast<std::size_t>(m));
    for (auto& r : rows) r = draw(rng);
    TreeParams tp{params.max_depth, params.min_leaf, features, rng()};
    e.trees[static_cast<std::size_t>(i)] = fit_tree(data.X, data.y, rows, tp);
  });
  return e;
}

Ensemble fit_boosting(const Dataset& data, const BoostingParams& params) {
  data.validate();
  if (params.n_trees < 0) throw std::invalid_argument("n_trees must be >= 0");
  if (!(params.gamma > 0.0 && params.gamma <= 1.0)) {
    throw std::invalid_argument("gamma must lie in (0, 1]");
  }
  if (!(params.row_subsample > 0.0 && params.row_subsample <= 1.0)) {
    throw std::invalid_argument("row_subsample must lie in (0, 1]");
  }
  const Index m = data.rows();
  const auto take = static_cast<std::size_t>(std::max<Index>(
      1, static_cast<Index>(std::llround(params.row_subsample * static_cast<double>(m)))));

  Ensemble e;
  e.kind = EnsembleKind::kBoosting;
  e.gamma = params.gamma;
  e.depth = params.max_depth;
  e.train_mean = data.y.mean();
  e.n_features = static_cast<int>(data.cols());

  std::mt19937_64 rng(params.seed);
  std::vector<Index> all(static_cast<std::size_t>(m));
  std::iota(all.begin(), all.end(), Index{0});
  Vector residual = data.y.array() - e.train_mean;
  std::vector<Index> rows;
  for (int i = 0; i < params.n_trees; ++i) {
    rows.clear();
    std::sample(all.begin(), all.end(), std::back_inserter(rows), take, rng);
    TreeParams tp{params.max_depth, params.min_leaf, 0, rng()};
    auto tree = fit_tree(data.X, residual, rows, tp);
    for (Index j = 0; j < m; ++j) {
      residual(j) -= params.gamma * tree.predict_row(data.X.row(j));
    }
    e.trees.push_back(std::move(tree));
  }
  return e;
}

Vector predict_ensemble(const Ensemble& e, const Matrix& X) {
  return predict_ensemble(e, X, PrunedModel::full(e));
}

Vector predict_ensemble(const Ensemble& e, const Matrix& X,
                        const PrunedModel& model) {
  check_model(e, model);
  check_columns(e, X);
  Vector out = Vector::Constant(X.rows(), e.base());
  for (std::size_t i = 0; i < e.trees.size(); ++i) {
    const int k = model.kept_depth[i];
    const double w = e.gamma * model.beta[i];
    if (k == 0 || w == 0.0) continue;
    const auto& tree = e.trees[i];
    for (Index j = 0; j < X.rows(); ++j) out(j) += w * tree.predict_row(X.row(j), k);
  }
  return out;
}

Matrix tree_predictions(const Ensemble& e, const Matrix& X) {
  check_columns(e, X);
  Matrix out(X.rows(), e.size());
  parallel_for(e.size(), [&](Index i) {
    out.col(i) = predict_tree(e.trees[static_cast<std::size_t>(i)], X);
  });
  return out;
}

}  // namespace forestprune
