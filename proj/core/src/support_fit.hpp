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

#include <algorithm>
#include <vector>

#include <Eigen/QR>

#include "forestprune/common.hpp"

namespace forestprune::detail {

// Least squares restricted to a column support, through the Gram matrix.
class SupportFitter {
 public:
  SupportFitter(const Matrix& B, const Vector& r)
      : gram_(B.transpose() * B), corr_(B.transpose() * r),
        rr_(r.squaredNorm()), m_(static_cast<double>(r.size())) {}

  Index size() const { return gram_.rows(); }
  const Matrix& gram() const { return gram_; }
  const Vector& corr() const { return corr_; }
  double response_norm() const { return rr_; }

  Vector fit(const std::vector<Index>& support) const {
    Vector beta = Vector::Zero(size());
    if (support.empty()) return beta;
    const Index k = static_cast<Index>(support.size());
    Matrix G(k, k);
    Vector b(k);
    for (Index a = 0; a < k; ++a) {
      const Index ia = support[static_cast<std::size_t>(a)];
      b(a) = corr_(ia);
      for (Index c = 0; c < k; ++c) {
        G(a, c) = gram_(ia, support[static_cast<std::size_t>(c)]);
      }
    }
    const Vector sol = G.completeOrthogonalDecomposition().solve(b);
    for (Index a = 0; a < k; ++a) beta(support[static_cast<std::size_t>(a)]) = sol(a);
    return beta;
  }

  // (1/m)||r - B beta||^2 expanded through the Gram matrix.
  double loss(const Vector& beta) const {
    const double v = (rr_ - 2.0 * beta.dot(corr_) + beta.dot(gram_ * beta)) / m_;
    return std::max(v, 0.0);
  }

 private:
  Matrix gram_;
  Vector corr_;
  double rr_;
  double m_;
};

inline std::vector<Index> support_of(const Vector& beta) {
  std::vector<Index> s;
  for (Index i = 0; i < beta.size(); ++i) {
    if (beta(i) != 0.0) s.push_back(i);
  }
  return s;
}

}  // namespace forestprune::detail
