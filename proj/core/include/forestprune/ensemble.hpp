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
#include <string_view>
#include <vector>

#include "forestprune/dataset.hpp"
#include "forestprune/tree.hpp"

namespace forestprune {

enum class EnsembleKind { kBagging, kBoosting };

std::string_view to_string(EnsembleKind kind);
EnsembleKind parse_ensemble_kind(std::string_view name);

// Ordered trees with a shared dampening factor. Prediction is
// base() + gamma * sum_i T_i(x).
struct Ensemble {
  EnsembleKind kind = EnsembleKind::kBagging;
  std::vector<RegressionTree> trees;
  double gamma = 1.0;
  // Ensemble-wide depth d; depth-indexed structures are padded to it.
  int depth = 0;
  // Boosting intercept; unused (zero) for bagging.
  double train_mean = 0.0;
  int n_features = 0;

  int size() const { return static_cast<int>(trees.size()); }
  double base() const {
    return kind == EnsembleKind::kBoosting ? train_mean : 0.0;
  }
  // Sum of node_count() over the trees.
  Index node_count() const;
};

// Per-tree kept depth and weight. Kept depth 0 removes the tree entirely.
struct PrunedModel {
  std::vector<int> kept_depth;
  std::vector<double> beta;

  static PrunedModel full(const Ensemble& e);
  static PrunedModel empty(const Ensemble& e);
};

struct ModelSize {
  Index nodes = 0;
  Index layers = 0;
  int trees = 0;
  // Average kept depth over the trees that survive; 0 when none do.
  double mean_depth = 0.0;
};

// Size of the pruned model. A tree survives when its kept depth and weight
// are both nonzero; kept depths past a tree's grown depth count as its
// grown depth.
ModelSize measure(const Ensemble& e, const PrunedModel& model);

struct BaggingParams {
  int n_trees = 100;
  int max_depth = 20;
  // 0 selects floor(sqrt(p)).
  int feature_subsample = 0;
  int min_leaf = 1;
  std::uint64_t seed = 0;
};

struct BoostingParams {
  int n_trees = 250;
  int max_depth = 5;
  double gamma = 0.1;
  double row_subsample = 0.25;
  int min_leaf = 5;
  std::uint64_t seed = 0;
};

// Trees on bootstrap resamples with per-split feature subsampling; gamma = 1/n.
Ensemble fit_bagging(const Dataset& data, const BaggingParams& params);

// Least-squares gradient boosting: tree i fits the residuals of
// train_mean + gamma * sum_{j<i} T_j on a row subsample drawn without
// replacement.
Ensemble fit_boosting(const Dataset& data, const BoostingParams& params);

Vector predict_ensemble(const Ensemble& e, const Matrix& X);
Vector predict_ensemble(const Ensemble& e, const Matrix& X,
                        const PrunedModel& model);

// Column i is T_i(X) (unscaled, full depth).
Matrix tree_predictions(const Ensemble& e, const Matrix& X);

}  // namespace forestprune
