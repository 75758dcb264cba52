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

#include "forestprune/polish.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "support_fit.hpp"

namespace forestprune {

namespace {

using detail::SupportFitter;
using detail::support_of;

// Columns of the swap neighbourhood are only explored for bases this small.
constexpr Index kSwapSearchLimit = 32;

void check_inputs(const PolishBasis& basis, const Vector& r, double alpha2) {
  if (basis.columns.rows() != r.size()) {
    throw std::invalid_argument("basis rows do not match the response length");
  }
  if (alpha2 < 0.0) throw std::invalid_argument("alpha2 must be >= 0");
}

Index count_nonzero(const Vector& beta) {
  return static_cast<Index>((beta.array() != 0.0).count());
}

// Largest eigenvalue of a symmetric PSD matrix by power iteration.
double top_eigenvalue(const Matrix& A) {
  const Index s = A.rows();
  Vector v(s);
  for (Index i = 0; i < s; ++i) v(i) = 1.0 + 0.1 * static_cast<double>(i) / s;
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < 1000; ++it) {
    Vector w = A * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    const double next = v.dot(w);
    v = w / norm;
    if (std::abs(next - lambda) <= 1e-12 * std::abs(next)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda;
}

double value(const SupportFitter& fit, const Vector& beta, double alpha2) {
  return fit.loss(beta) + alpha2 * static_cast<double>(count_nonzero(beta));
}

// Best-improvement search over drop, add and (small bases) swap moves, each
// refit by least squares.
Vector support_search(const SupportFitter& fit, Vector beta, double alpha2) {
  const Index s = fit.size();
  double current = value(fit, beta, alpha2);
  for (int round = 0; round < 10 * static_cast<int>(s) + 10; ++round) {
    std::vector<Index> support = support_of(beta);
    std::vector<bool> in(static_cast<std::size_t>(s), false);
    for (Index i : support) in[static_cast<std::size_t>(i)] = true;

    Vector best_beta = beta;
    double best = current;
    auto consider = [&](const std::vector<Index>& candidate) {
      Vector b = fit.fit(candidate);
      const double v = value(fit, b, alpha2);
      if (v < best - 1e-12 * std::abs(best)) {
        best = v;
        best_beta = std::move(b);
      }
    };
    for (std::size_t j = 0; j < support.size(); ++j) {
      std::vector<Index> c = support;
      c.erase(c.begin() + static_cast<std::ptrdiff_t>(j));
      consider(c);
    }
    for (Index j = 0; j < s; ++j) {
      if (in[static_cast<std::size_t>(j)]) continue;
      std::vector<Index> c = support;
      c.push_back(j);
      consider(c);
      if (s > kSwapSearchLimit) continue;
      for (std::size_t out = 0; out < support.size(); ++out) {
        std::vector<Index> w = support;
        w[out] = j;
        consider(w);
      }
    }
    if (best >= current) break;
    current = best;
    beta = std::move(best_beta);
  }
  return beta;
}

}  // namespace

PolishBasis PolishBasis::build(const PruneProblem& problem,
                               const PrunedModel& model) {
  if (model.kept_depth.size() != static_cast<std::size_t>(problem.size())) {
    throw std::invalid_argument("pruned model does not match the problem size");
  }
  PolishBasis basis;
  std::vector<Vector> cols;
  for (int i = 0; i < problem.size(); ++i) {
    const int kept = model.kept_depth[static_cast<std::size_t>(i)];
    if (kept == 0 || model.beta[static_cast<std::size_t>(i)] == 0.0) continue;
    Vector c = problem.contribution(i, kept);
    if (c.squaredNorm() == 0.0) continue;
    cols.push_back(std::move(c));
    basis.trees.push_back(i);
  }
  basis.columns.resize(problem.rows(), static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    basis.columns.col(static_cast<Index>(j)) = cols[j];
  }
  return basis;
}

double polish_objective(const Matrix& B, const Vector& r, const Vector& beta,
                        double alpha2, int rho) {
  const double loss =
      (r - B * beta).squaredNorm() / static_cast<double>(r.size());
  if (rho == 2) return loss + alpha2 * beta.squaredNorm();
  if (rho == 0) return loss + alpha2 * static_cast<double>(count_nonzero(beta));
  throw std::invalid_argument("rho must be 0 or 2");
}

Vector ridge_polish(const PolishBasis& basis, const Vector& y_resid,
                    double alpha2) {
  check_inputs(basis, y_resid, alpha2);
  const Matrix& B = basis.columns;
  if (B.cols() == 0) return Vector();
  if (alpha2 == 0.0) return B.completeOrthogonalDecomposition().solve(y_resid);
  const double m = static_cast<double>(B.rows());
  Matrix A = B.transpose() * B / m;
  A.diagonal().array() += alpha2;
  const Vector rhs = B.transpose() * y_resid / m;
  return A.ldlt().solve(rhs);
}

SubsetPolishResult subset_polish(const PolishBasis& basis, const Vector& y_resid,
                                 double alpha2,
                                 const SubsetPolishOptions& options) {
  check_inputs(basis, y_resid, alpha2);
  const Matrix& B = basis.columns;
  const Index s = B.cols();
  SubsetPolishResult out;
  if (s == 0) {
    out.beta = Vector();
    out.objective = y_resid.squaredNorm() / static_cast<double>(y_resid.size());
    return out;
  }
  if (options.start.size() != 0 && options.start.size() != s) {
    throw std::invalid_argument("subset polish start has the wrong length");
  }
  const double m = static_cast<double>(B.rows());
  const SupportFitter fitter(B, y_resid);
  // Slightly above the power-iteration estimate so 1/L stays a descent step.
  const double L = 1.001 * top_eigenvalue(2.0 * B.transpose() * B / m);

  Vector beta = options.start.size() ? options.start : Vector::Ones(s);
  double current = value(fitter, beta, alpha2);
  if (L > 0.0) {
    for (int it = 0; it < options.max_iters; ++it) {
      const Vector grad = -2.0 * B.transpose() * (y_resid - B * beta) / m;
      Vector u = beta - grad / L;
      for (Index i = 0; i < s; ++i) {
        if (0.5 * L * u(i) * u(i) <= alpha2) u(i) = 0.0;
      }
      const bool same_support = support_of(u) == support_of(beta);
      const double next = value(fitter, u, alpha2);
      beta = std::move(u);
      out.iterations = it + 1;
      out.history.push_back(next);
      const bool stalled = current - next <= options.tol * std::abs(current);
      current = next;
      if (same_support && stalled) break;
    }
  }

  Vector refit = fitter.fit(support_of(beta));
  if (value(fitter, refit, alpha2) <= current) beta = std::move(refit);
  beta = support_search(fitter, std::move(beta), alpha2);

  // Restarts catch optima that need several columns to enter or leave
  // together.
  std::vector<Index> all(static_cast<std::size_t>(s));
  for (Index i = 0; i < s; ++i) all[static_cast<std::size_t>(i)] = i;
  std::vector<Vector> starts{fitter.fit(all), Vector::Zero(s)};
  if (s <= kSwapSearchLimit) {
    // Every size along the greedy forward-selection path...
    std::vector<Index> chosen;
    std::vector<bool> used(static_cast<std::size_t>(s), false);
    while (static_cast<Index>(chosen.size()) + 1 < s) {
      Index pick = -1;
      double pick_loss = std::numeric_limits<double>::infinity();
      for (Index j = 0; j < s; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        chosen.push_back(j);
        const double l = fitter.loss(fitter.fit(chosen));
        chosen.pop_back();
        if (l < pick_loss) {
          pick_loss = l;
          pick = j;
        }
      }
      chosen.push_back(pick);
      used[static_cast<std::size_t>(pick)] = true;
      starts.push_back(fitter.fit(chosen));
    }
    // And along the greedy backward-elimination path.
    std::vector<Index> kept = all;
    while (kept.size() > 1) {
      std::size_t drop = 0;
      double drop_loss = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < kept.size(); ++j) {
        std::vector<Index> c = kept;
        c.erase(c.begin() + static_cast<std::ptrdiff_t>(j));
        const double l = fitter.loss(fitter.fit(c));
        if (l < drop_loss) {
          drop_loss = l;
          drop = j;
        }
      }
      kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(drop));
      starts.push_back(fitter.fit(kept));
    }
  }
  std::mt19937_64 rng(options.seed);
  for (int r = 0; r < options.restarts; ++r) {
    std::vector<Index> random_support;
    for (Index i = 0; i < s; ++i) {
      if (rng() & 1u) random_support.push_back(i);
    }
    starts.push_back(fitter.fit(random_support));
  }
  for (Vector candidate : starts) {
    candidate = support_search(fitter, std::move(candidate), alpha2);
    if (value(fitter, candidate, alpha2) <
        value(fitter, beta, alpha2) - 1e-12 * value(fitter, beta, alpha2)) {
      beta = std::move(candidate);
    }
  }
  out.beta = std::move(beta);
  out.objective = polish_objective(B, y_resid, out.beta, alpha2, 0);
  out.history.push_back(out.objective);
  return out;
}

SubsetPolishResult subset_polish_exact(const PolishBasis& basis,
                                       const Vector& y_resid, double alpha2) {
  check_inputs(basis, y_resid, alpha2);
  const Index s = basis.size();
  if (s > kExactSubsetLimit) {
    throw std::invalid_argument("too many columns for exact subset enumeration");
  }
  const SupportFitter fitter(basis.columns, y_resid);
  Vector best_beta = Vector::Zero(s);
  double best = value(fitter, best_beta, alpha2);
  std::vector<Index> support;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << s); ++mask) {
    support.clear();
    for (Index i = 0; i < s; ++i) {
      if (mask & (std::uint64_t{1} << i)) support.push_back(i);
    }
    Vector beta = fitter.fit(support);
    const double v = value(fitter, beta, alpha2);
    if (v < best) {
      best = v;
      best_beta = std::move(beta);
    }
  }
  SubsetPolishResult out;
  out.beta = std::move(best_beta);
  out.objective = polish_objective(basis.columns, y_resid, out.beta, alpha2, 0);
  out.history.push_back(out.objective);
  return out;
}

std::vector<SubsetPolishResult> subset_polish_path(
    const PolishBasis& basis, const Vector& y_resid,
    std::span<const double> alpha2_grid, const SubsetPolishOptions& options) {
  for (std::size_t j = 1; j < alpha2_grid.size(); ++j) {
    if (alpha2_grid[j] < alpha2_grid[j - 1]) {
      throw std::invalid_argument("alpha2 grid must be ascending");
    }
  }
  std::vector<SubsetPolishResult> path;
  const Index s = basis.size();
  Vector previous = options.start.size() ? options.start : Vector::Ones(s);
  for (double alpha2 : alpha2_grid) {
    const std::vector<Index> support = support_of(previous);
    PolishBasis sub;
    sub.columns.resize(basis.columns.rows(), static_cast<Index>(support.size()));
    SubsetPolishOptions local = options;
    local.start.resize(static_cast<Index>(support.size()));
    for (std::size_t j = 0; j < support.size(); ++j) {
      sub.columns.col(static_cast<Index>(j)) = basis.columns.col(support[j]);
      sub.trees.push_back(basis.trees[static_cast<std::size_t>(support[j])]);
      local.start(static_cast<Index>(j)) = previous(support[j]);
    }
    SubsetPolishResult r = subset_polish(sub, y_resid, alpha2, local);
    Vector full = Vector::Zero(s);
    for (std::size_t j = 0; j < support.size(); ++j) {
      full(support[j]) = r.beta(static_cast<Index>(j));
    }
    r.beta = full;
    previous = full;
    path.push_back(std::move(r));
  }
  return path;
}

PrunedModel apply_polish(const PrunedModel& pruned, const PolishBasis& basis,
                         const Vector& beta) {
  if (beta.size() != basis.size()) {
    throw std::invalid_argument("weight vector does not match the basis");
  }
  PrunedModel out;
  out.kept_depth.assign(pruned.kept_depth.size(), 0);
  out.beta.assign(pruned.beta.size(), 0.0);
  for (std::size_t j = 0; j < basis.trees.size(); ++j) {
    const auto i = static_cast<std::size_t>(basis.trees[j]);
    const double b = beta(static_cast<Index>(j));
    if (b == 0.0) continue;
    out.kept_depth[i] = pruned.kept_depth[i];
    out.beta[i] = b;
  }
  return out;
}

}  // namespace forestprune
