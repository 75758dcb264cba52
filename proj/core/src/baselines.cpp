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

#include "forestprune/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "support_fit.hpp"

namespace forestprune {

namespace {

using detail::SupportFitter;
using detail::support_of;

std::size_t at(Index i) { return static_cast<std::size_t>(i); }

double soft_threshold(double x, double t) {
  if (x > t) return x - t;
  if (x < -t) return x + t;
  return 0.0;
}

// Candidate columns gamma * T_i(X) and the centered response.
struct TreeColumns {
  Matrix columns;
  Vector response;
  std::vector<Index> nodes;
};

TreeColumns tree_columns(const Ensemble& e, const Dataset& train, int count) {
  if (train.cols() != e.n_features) {
    throw std::invalid_argument("training data has " +
                                std::to_string(train.cols()) +
                                " features, ensemble expects " +
                                std::to_string(e.n_features));
  }
  TreeColumns out;
  Ensemble head = e;
  head.trees.resize(static_cast<std::size_t>(count));
  out.columns = e.gamma * tree_predictions(head, train.X);
  out.response = train.y.array() - e.base();
  for (const auto& t : head.trees) out.nodes.push_back(t.node_count());
  return out;
}

Index support_nodes(const std::vector<Index>& support,
                    const std::vector<Index>& nodes) {
  Index total = 0;
  for (Index i : support) total += nodes[at(i)];
  return total;
}

// Exhaustive search over budget-feasible supports. The Cholesky factor of the
// support Gram matrix grows one column per include step, so each visited
// support costs O(k^2).
class ExactSearch {
 public:
  ExactSearch(const SupportFitter& fit, const std::vector<Index>& nodes,
              Index budget)
      : fit_(fit), nodes_(nodes), budget_(budget),
        n_(static_cast<Index>(nodes.size())), L_(Matrix::Zero(n_, n_)),
        w_(Vector::Zero(n_)) {}

  std::vector<Index> run() {
    visit(0, 0, 0.0);
    return best_;
  }

 private:
  void visit(Index next, Index used, double explained) {
    if (explained > best_explained_ + 1e-13 * fit_.response_norm()) {
      best_explained_ = explained;
      best_ = support_;
    }
    for (Index j = next; j < n_; ++j) {
      if (used + nodes_[at(j)] > budget_) continue;
      const Index k = static_cast<Index>(support_.size());
      // New row of the factor: l = L^{-1} G_{S,j}, pivot sqrt(G_jj - |l|^2).
      Vector g(k);
      for (Index a = 0; a < k; ++a) g(a) = fit_.gram()(support_[at(a)], j);
      Vector l = g;
      if (k > 0) {
        L_.topLeftCorner(k, k).triangularView<Eigen::Lower>().solveInPlace(l);
      }
      const double pivot2 = fit_.gram()(j, j) - l.squaredNorm();
      if (pivot2 <= 1e-12 * std::max(fit_.gram()(j, j), 1e-300)) continue;
      const double pivot = std::sqrt(pivot2);
      L_.row(k).head(k) = l.transpose();
      L_(k, k) = pivot;
      const double wk =
          (fit_.corr()(j) - (k > 0 ? l.dot(w_.head(k)) : 0.0)) / pivot;
      w_(k) = wk;
      support_.push_back(j);
      visit(j + 1, used + nodes_[at(j)], explained + wk * wk);
      support_.pop_back();
    }
  }

  const SupportFitter& fit_;
  const std::vector<Index>& nodes_;
  Index budget_;
  Index n_;
  Matrix L_;
  Vector w_;
  std::vector<Index> support_;
  std::vector<Index> best_;
  double best_explained_ = 0.0;
};

// Best-improvement drop/add/swap search under the node budget.
std::vector<Index> budget_swap_search(const SupportFitter& fit,
                                      const std::vector<Index>& nodes,
                                      Index budget, std::vector<Index> support) {
  const Index n = static_cast<Index>(nodes.size());
  double current = fit.loss(fit.fit(support));
  for (int round = 0; round < 10 * static_cast<int>(n) + 10; ++round) {
    std::vector<bool> in(at(n), false);
    for (Index i : support) in[at(i)] = true;
    std::vector<Index> best_support = support;
    double best = current;
    auto consider = [&](const std::vector<Index>& c) {
      if (support_nodes(c, nodes) > budget) return;
      const double v = fit.loss(fit.fit(c));
      if (v < best - 1e-12 * std::abs(best)) {
        best = v;
        best_support = c;
      }
    };
    for (std::size_t j = 0; j < support.size(); ++j) {
      std::vector<Index> c = support;
      c.erase(c.begin() + static_cast<std::ptrdiff_t>(j));
      consider(c);
    }
    for (Index j = 0; j < n; ++j) {
      if (in[at(j)]) continue;
      std::vector<Index> c = support;
      c.push_back(j);
      consider(c);
      for (std::size_t out = 0; out < support.size(); ++out) {
        std::vector<Index> w = support;
        w[out] = j;
        consider(w);
      }
    }
    if (best >= current) break;
    current = best;
    support = std::move(best_support);
  }
  std::sort(support.begin(), support.end());
  return support;
}

}  // namespace

std::vector<int> trim_order(const Ensemble& e, std::uint64_t seed) {
  std::vector<int> order(static_cast<std::size_t>(e.size()));
  std::iota(order.begin(), order.end(), 0);
  if (e.kind == EnsembleKind::kBagging) {
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  return order;
}

PrunedModel baseline_trim(const Ensemble& e, int keep, std::uint64_t seed) {
  if (keep < 0 || keep > e.size()) {
    throw std::invalid_argument("keep must lie in [0, " +
                                std::to_string(e.size()) + "]");
  }
  PrunedModel model = PrunedModel::empty(e);
  if (keep == 0) return model;
  const double beta = e.kind == EnsembleKind::kBagging
                          ? static_cast<double>(e.size()) / keep
                          : 1.0;
  const auto order = trim_order(e, seed);
  for (int j = 0; j < keep; ++j) {
    const auto i = static_cast<std::size_t>(order[static_cast<std::size_t>(j)]);
    model.kept_depth[i] = e.depth;
    model.beta[i] = beta;
  }
  return model;
}

double lasso_lambda_max(const Matrix& columns, const Vector& r) {
  if (columns.cols() == 0) return 0.0;
  return (2.0 * columns.transpose() * r).cwiseAbs().maxCoeff() /
         static_cast<double>(r.size());
}

double lasso_kkt_violation(const Matrix& columns, const Vector& r,
                           const Vector& beta, double lambda) {
  const double m = static_cast<double>(r.size());
  const Vector grad = -2.0 * columns.transpose() * (r - columns * beta) / m;
  double worst = 0.0;
  for (Index j = 0; j < beta.size(); ++j) {
    const double v = beta(j) != 0.0
                         ? std::abs(grad(j) + lambda * (beta(j) > 0 ? 1.0 : -1.0))
                         : std::max(0.0, std::abs(grad(j)) - lambda);
    worst = std::max(worst, v);
  }
  return worst;
}

LassoPath lasso_path(const Matrix& columns, const Vector& r,
                     std::span<const double> lambdas,
                     const LassoOptions& options) {
  if (columns.rows() != r.size()) {
    throw std::invalid_argument("column rows do not match the response length");
  }
  for (std::size_t j = 0; j < lambdas.size(); ++j) {
    if (!(lambdas[j] > 0.0)) throw std::invalid_argument("lambdas must be positive");
    if (j > 0 && lambdas[j] > lambdas[j - 1]) {
      throw std::invalid_argument("lambdas must be descending");
    }
  }
  const Index n = columns.cols();
  const double m = static_cast<double>(r.size());
  const Vector scale = columns.colwise().squaredNorm().transpose() / m;
  LassoPath path;
  Vector beta = Vector::Zero(n);
  Vector resid = r;
  for (double lambda : lambdas) {
    for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
      double biggest = 0.0;
      for (Index j = 0; j < n; ++j) {
        if (scale(j) == 0.0) continue;
        const double rho = columns.col(j).dot(resid) / m + scale(j) * beta(j);
        const double next = soft_threshold(rho, lambda / 2.0) / scale(j);
        const double delta = next - beta(j);
        if (delta == 0.0) continue;
        resid.noalias() -= delta * columns.col(j);
        beta(j) = next;
        biggest = std::max(biggest, std::abs(delta) * std::sqrt(scale(j)));
      }
      if (biggest <= options.tol) break;
    }
    path.lambdas.push_back(lambda);
    path.betas.push_back(beta);
    path.kkt_violation.push_back(lasso_kkt_violation(columns, r, beta, lambda));
  }
  return path;
}

LassoPath lasso_prune(const Ensemble& e, const Dataset& train,
                      std::span<const double> lambdas,
                      const LassoOptions& options) {
  const TreeColumns tc = tree_columns(e, train, e.size());
  return lasso_path(tc.columns, tc.response, lambdas, options);
}

std::vector<double> lasso_lambda_grid(double lambda_max, int count,
                                      double min_ratio) {
  if (count < 1) throw std::invalid_argument("lambda grid needs >= 1 point");
  if (!(lambda_max > 0.0)) throw std::invalid_argument("lambda_max must be > 0");
  std::vector<double> grid;
  for (int j = 0; j < count; ++j) {
    const double t = count == 1 ? 0.0 : static_cast<double>(j) / (count - 1);
    grid.push_back(lambda_max * std::pow(min_ratio, t));
  }
  return grid;
}

Ensemble ccp_sweep(const Ensemble& e, double ccp_alpha) {
  if (ccp_alpha < 0.0) throw std::invalid_argument("ccp_alpha must be >= 0");
  Ensemble out = e;
  for (auto& t : out.trees) t = ccp_prune(t, ccp_alpha);
  return out;
}

std::vector<double> ccp_alphas(const Ensemble& e) {
  std::vector<double> all;
  for (const auto& t : e.trees) {
    const auto path = ccp_path(t);
    all.insert(all.end(), path.begin(), path.end());
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

PrunedModel BstsResult::model(const Ensemble& e) const {
  PrunedModel out = PrunedModel::empty(e);
  for (int i : selected) {
    const auto k = static_cast<std::size_t>(i);
    if (beta(i) == 0.0) continue;
    out.kept_depth[k] = e.depth;
    out.beta[k] = beta(i);
  }
  return out;
}

BstsResult bsts(const Ensemble& e, const Dataset& train, Index node_budget,
                BstsMode mode, int candidates) {
  if (node_budget < 0) throw std::invalid_argument("node budget must be >= 0");
  const int count = candidates < 0 ? e.size() : std::min(candidates, e.size());
  if (mode == BstsMode::kExact && count > kBstsExactLimit) {
    throw std::invalid_argument("exact best-subset selection supports at most " +
                                std::to_string(kBstsExactLimit) + " trees");
  }
  const TreeColumns tc = tree_columns(e, train, count);
  const SupportFitter fit(tc.columns, tc.response);

  std::vector<Index> support;
  if (mode == BstsMode::kExact) {
    support = ExactSearch(fit, tc.nodes, node_budget).run();
  } else {
    const double lmax = lasso_lambda_max(tc.columns, tc.response);
    double best = fit.loss(Vector::Zero(count));
    if (lmax > 0.0) {
      const auto grid = lasso_lambda_grid(lmax, 100);
      const LassoPath path = lasso_path(tc.columns, tc.response, grid);
      for (const auto& b : path.betas) {
        const auto s = support_of(b);
        if (support_nodes(s, tc.nodes) > node_budget) continue;
        const double v = fit.loss(fit.fit(s));
        if (v < best) {
          best = v;
          support = s;
        }
      }
    }
    support = budget_swap_search(fit, tc.nodes, node_budget, std::move(support));
  }

  BstsResult out;
  const Vector coef = fit.fit(support);
  out.beta = Vector::Zero(e.size());
  out.beta.head(count) = coef;
  for (Index i : support) {
    if (coef(i) == 0.0) continue;
    out.selected.push_back(static_cast<int>(i));
    out.nodes += tc.nodes[at(i)];
  }
  out.objective = (tc.response - tc.columns * coef).squaredNorm() /
                  static_cast<double>(tc.response.size());
  return out;
}

}  // namespace forestprune
