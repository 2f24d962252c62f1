// Copyright 2026 The fidkit Authors.
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FIDKIT_STATS_H_
#define FIDKIT_STATS_H_

#include <cstdint>
#include <span>

#include <Eigen/Core>

#include "fidkit/error.h"

namespace fidkit {

// N x D, one sample per row.
using FeatureMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct GaussianStats {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  std::uint64_t count = 0;

  int dim() const { return static_cast<int>(mean.size()); }
  // Throws unless cov is D x D, symmetric within 1e-10, finite, and N >= 2.
  void validate() const;
};

// Pairwise (tree) summation in index order; the result depends only on the
// sequence, never on threading.
double pairwise_sum(std::span<const double> values);

// Mean and unbiased (N - 1) covariance, symmetrized. Rows are put into
// lexicographic order before any reduction, so the result is bit-identical
// under row permutation.
GaussianStats fit_gaussian_rows(const FeatureMatrix& feats);

template <typename Derived>
GaussianStats fit_gaussian(const Eigen::MatrixBase<Derived>& feats) {
  return fit_gaussian_rows(feats.template cast<double>());
}

struct MatrixSqrt {
  // Symmetric S with Tr(S) = Tr((cov1 cov2)^{1/2}).
  Eigen::MatrixXd root;
  // Diagonal loading applied to both inputs; 0 unless the first attempt failed.
  double epsilon = 0.0;
};

// S = (A cov2 A)^{1/2} with A = cov1^{1/2}, both roots by symmetric
// eigendecomposition with eigenvalues clamped at zero.
MatrixSqrt sqrtm_product(const Eigen::MatrixXd& cov1, const Eigen::MatrixXd& cov2);

struct FrechetResult {
  double value = 0.0;
  double mean_term = 0.0;
  double trace_term = 0.0;
  double epsilon = 0.0;
};

// ||mu1 - mu2||^2 + Tr(cov1 + cov2 - 2 (cov1 cov2)^{1/2}). Round-off
// negatives are clamped to zero; larger negatives throw. Identical inputs give
// exactly 0, and the argument order is canonicalized so the result is
// bitwise symmetric.
FrechetResult frechet(const GaussianStats& a, const GaussianStats& b);

inline double frechet_distance(const GaussianStats& a, const GaussianStats& b) {
  return frechet(a, b).value;
}

// Unbiased MMD^2 with the cubic polynomial kernel k(x, y) = (x.y / D + 1)^3,
// over the full sets. Exactly symmetric in its arguments.
double kid_full(const FeatureMatrix& x, const FeatureMatrix& y);

// Block estimator: average of the unbiased MMD^2 over `subsets` random
// subsets of `subset_size` rows drawn without replacement from each side.
double kid_subsets(const FeatureMatrix& x, const FeatureMatrix& y, int subsets,
                   int subset_size, std::uint64_t seed);

template <typename DerivedX, typename DerivedY>
double kid(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedY>& y) {
  return kid_full(x.template cast<double>(), y.template cast<double>());
}

}  // namespace fidkit

#endif  // FIDKIT_STATS_H_
