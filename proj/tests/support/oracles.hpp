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

// Test-side reference computations. None of these touch the depth-difference
// or solver code: pruned models are evaluated from explicitly truncated trees.

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include <forestprune/forestprune.hpp>

namespace fp_test {

using forestprune::Ensemble;
using forestprune::Index;
using forestprune::Matrix;
using forestprune::RegressionTree;
using forestprune::Vector;
using forestprune::Weighting;

// Node count of every depth layer 1..d, by scanning the node array.
inline std::vector<Index> layer_sizes(const RegressionTree& tree, int d) {
  std::vector<Index> counts(static_cast<std::size_t>(d), 0);
  for (const auto& n : tree.nodes()) {
    if (n.depth >= 1 && n.depth <= d) ++counts[static_cast<std::size_t>(n.depth - 1)];
  }
  return counts;
}

// Truncated-tree predictions for every tree and every kept depth 0..d. Kept
// depth 0, and any tree without a split, contributes nothing.
class TruncationTable {
 public:
  TruncationTable(const Ensemble& e, const Matrix& X) : e_(e) {
    for (const auto& t : e.trees) {
      std::vector<Vector> per_k;
      for (int k = 0; k <= e.depth; ++k) {
        if (k == 0 || t.depth() == 0) {
          per_k.push_back(Vector::Zero(X.rows()));
        } else {
          per_k.push_back(forestprune::predict_tree(forestprune::truncate_tree(t, k), X));
        }
      }
      table_.push_back(std::move(per_k));
    }
  }

  const Vector& at(int tree, int k) const {
    return table_[static_cast<std::size_t>(tree)][static_cast<std::size_t>(k)];
  }

 private:
  const Ensemble& e_;
  std::vector<std::vector<Vector>> table_;
};

struct OracleWeights {
  std::vector<std::vector<double>> w;  // w[i][k-1]
  double K = 0.0;
};

inline OracleWeights oracle_weights(const Ensemble& e, Weighting scheme) {
  OracleWeights out;
  for (const auto& t : e.trees) {
    const auto sizes = layer_sizes(t, e.depth);
    std::vector<double> row;
    for (Index c : sizes) {
      if (scheme == Weighting::kDepth) {
        row.push_back(c > 0 ? 1.0 : 0.0);
      } else {
        row.push_back(static_cast<double>(c));
        out.K += static_cast<double>(c);
      }
    }
    out.w.push_back(std::move(row));
  }
  if (scheme == Weighting::kDepth) out.K = static_cast<double>(e.size()) * e.depth;
  return out;
}

// (1/m)||y - base - gamma sum beta_i T_i^(k_i)||^2 + (alpha/K) sum_i sum_{l<=k_i} w_il
//   + alpha2 * sum_{k_i > 0} pen(beta_i), pen = beta^2 (rho 2) or [beta != 0] (rho 0).
inline double oracle_objective(const Ensemble& e, const TruncationTable& table,
                               const OracleWeights& w, const Vector& y,
                               const std::vector<int>& kept,
                               const std::vector<double>& beta, double alpha,
                               double alpha2 = 0.0, int rho = -1) {
  Vector r = y.array() - e.base();
  double pen = 0.0;
  for (int i = 0; i < e.size(); ++i) {
    const auto si = static_cast<std::size_t>(i);
    const int k = kept[si];
    if (k == 0) continue;
    const double b = rho < 0 ? 1.0 : beta[si];
    r -= e.gamma * b * table.at(i, k);
    for (int l = 0; l < k; ++l) pen += w.w[si][static_cast<std::size_t>(l)];
  }
  double beta_pen = 0.0;
  if (rho >= 0) {
    for (int i = 0; i < e.size(); ++i) {
      const auto si = static_cast<std::size_t>(i);
      if (kept[si] == 0) continue;
      beta_pen += rho == 2 ? beta[si] * beta[si] : (beta[si] != 0.0 ? 1.0 : 0.0);
    }
  }
  const double m = static_cast<double>(y.size());
  return r.squaredNorm() / m + (w.K > 0 ? alpha / w.K * pen : 0.0) + alpha2 * beta_pen;
}

// Least-squares fit on a column subset by Householder QR, independent of the
// library's Gram-based fits. Returns the residual sum of squares / m.
inline double subset_ls_loss(const Matrix& B, const Vector& r,
                             const std::vector<Index>& support, Vector* beta = nullptr) {
  const double m = static_cast<double>(r.size());
  if (beta) *beta = Vector::Zero(B.cols());
  if (support.empty()) return r.squaredNorm() / m;
  Matrix S(B.rows(), static_cast<Index>(support.size()));
  for (std::size_t j = 0; j < support.size(); ++j) S.col(static_cast<Index>(j)) = B.col(support[j]);
  const Vector coef = S.colPivHouseholderQr().solve(r);
  if (beta) {
    for (std::size_t j = 0; j < support.size(); ++j) (*beta)(support[j]) = coef(static_cast<Index>(j));
  }
  return (r - S * coef).squaredNorm() / m;
}

// min over supports of loss + alpha2 |S| by full enumeration.
inline double exhaustive_subset(const Matrix& B, const Vector& r, double alpha2) {
  const Index s = B.cols();
  double best = r.squaredNorm() / static_cast<double>(r.size());
  for (unsigned mask = 1; mask < (1u << s); ++mask) {
    std::vector<Index> support;
    for (Index j = 0; j < s; ++j) {
      if (mask & (1u << j)) support.push_back(j);
    }
    best = std::min(best, subset_ls_loss(B, r, support) +
                              alpha2 * static_cast<double>(support.size()));
  }
  return best;
}

inline bool bitwise_equal(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) return false;
  for (Index i = 0; i < a.size(); ++i) {
    if (std::memcmp(&a(i), &b(i), sizeof(double)) != 0) return false;
  }
  return true;
}

}  // namespace fp_test
