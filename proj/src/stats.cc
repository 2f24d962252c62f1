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

#include "fidkit/stats.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "fidkit/rng.h"

namespace fidkit {
namespace {

constexpr Eigen::Index kPairwiseLeaf = 8;
constexpr Eigen::Index kRowBlock = 128;

bool all_finite(const FeatureMatrix& m) { return m.allFinite(); }

// Row-vector pairwise sum over rows [lo, hi) of m.
Eigen::RowVectorXd pairwise_row_sum(const FeatureMatrix& m, Eigen::Index lo,
                                    Eigen::Index hi) {
  if (hi - lo <= kPairwiseLeaf) {
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(m.cols());
    for (Eigen::Index i = lo; i < hi; ++i) acc += m.row(i);
    return acc;
  }
  const Eigen::Index mid = lo + (hi - lo) / 2;
  return pairwise_row_sum(m, lo, mid) + pairwise_row_sum(m, mid, hi);
}

template <typename T>
T pairwise_reduce(const std::vector<T>& parts, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return parts[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_reduce(parts, lo, mid) + pairwise_reduce(parts, mid, hi);
}

bool lexicographic_less(const double* a, const double* b, Eigen::Index n) {
  return std::lexicographical_compare(a, a + n, b, b + n);
}

FeatureMatrix sorted_rows(const FeatureMatrix& m) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(m.rows()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const Eigen::Index d = m.cols();
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return lexicographic_less(m.row(a).data(), m.row(b).data(), d);
  });
  FeatureMatrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.row(i) = m.row(order[i]);
  return out;
}

// Total order on matrices used to canonicalize argument order.
bool matrix_less(const FeatureMatrix& a, const FeatureMatrix& b) {
  if (a.rows() != b.rows()) return a.rows() < b.rows();
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                      b.data() + b.size());
}

bool stats_less(const GaussianStats& a, const GaussianStats& b) {
  const auto lex = [](const auto& x, const auto& y) {
    return std::lexicographical_compare(x.data(), x.data() + x.size(), y.data(),
                                        y.data() + y.size());
  };
  if (lex(a.mean, b.mean)) return true;
  if (lex(b.mean, a.mean)) return false;
  return lex(a.cov, b.cov);
}

struct PsdRoot {
  Eigen::MatrixXd root;
  double min_eigenvalue = 0.0;
  double max_abs_eigenvalue = 0.0;
  bool ok = false;
};

PsdRoot psd_sqrt(const Eigen::MatrixXd& m) {
  PsdRoot r;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) return r;
  const Eigen::VectorXd& lambda = es.eigenvalues();
  r.min_eigenvalue = lambda.size() ? lambda.minCoeff() : 0.0;
  r.max_abs_eigenvalue = lambda.size() ? lambda.cwiseAbs().maxCoeff() : 0.0;
  const Eigen::VectorXd roots = lambda.cwiseMax(0.0).cwiseSqrt();
  r.root = es.eigenvectors() * roots.asDiagonal() * es.eigenvectors().transpose();
  r.ok = r.root.allFinite();
  return r;
}

void check_psd(const PsdRoot& r, const char* name) {
  FIDKIT_CHECK(r.min_eigenvalue >= -1e-6 * std::max(1.0, r.max_abs_eigenvalue),
               std::string(name) + " is not positive semidefinite (min eigenvalue " +
                   std::to_string(r.min_eigenvalue) + ")");
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) {
  return (m + m.transpose()) * 0.5;
}

void check_covariance(const Eigen::MatrixXd& c, const char* name) {
  FIDKIT_CHECK(c.rows() == c.cols(), std::string(name) + " is not square");
  FIDKIT_CHECK(c.allFinite(), std::string(name) + " has non-finite entries");
  const double scale = std::max(1.0, c.cwiseAbs().maxCoeff());
  FIDKIT_CHECK((c - c.transpose()).cwiseAbs().maxCoeff() <= 1e-8 * scale,
               std::string(name) + " is not symmetric");
}

// Sum of k(x_i, y_j) over all i, j (or over i != j when `skip_diagonal`),
// computed in row blocks with a fixed reduction order.
double kernel_sum(const FeatureMatrix& x, const FeatureMatrix& y, bool skip_diagonal) {
  const double inv_d = 1.0 / static_cast<double>(x.cols());
  std::vector<double> block_sums;
  for (Eigen::Index lo = 0; lo < x.rows(); lo += kRowBlock) {
    const Eigen::Index rows = std::min(kRowBlock, x.rows() - lo);
    Eigen::MatrixXd k = (x.middleRows(lo, rows) * y.transpose()).array() * inv_d + 1.0;
    k = k.array().cube();
    if (skip_diagonal) {
      for (Eigen::Index r = 0; r < rows; ++r) k(r, lo + r) = 0.0;
    }
    block_sums.push_back(pairwise_sum({k.data(), static_cast<std::size_t>(k.size())}));
  }
  return pairwise_reduce(block_sums, 0, block_sums.size());
}

double mmd2_unbiased(const FeatureMatrix& x, const FeatureMatrix& y) {
  const double n = static_cast<double>(x.rows());
  const double m = static_cast<double>(y.rows());
  const double kxx = kernel_sum(x, x, true) / (n * (n - 1.0));
  const double kyy = kernel_sum(y, y, true) / (m * (m - 1.0));
  const double kxy = kernel_sum(x, y, false) / (n * m);
  return kxx + kyy - 2.0 * kxy;
}

void check_kid_inputs(const FeatureMatrix& x, const FeatureMatrix& y) {
  FIDKIT_CHECK(x.rows() >= 2 && y.rows() >= 2, "kid: need at least 2 rows per side");
  FIDKIT_CHECK(x.cols() == y.cols() && x.cols() >= 1,
               "kid: feature dimension mismatch " + std::to_string(x.cols()) + " vs " +
                   std::to_string(y.cols()));
  FIDKIT_CHECK(all_finite(x) && all_finite(y), "kid: non-finite features");
}

}  // namespace

void GaussianStats::validate() const {
  FIDKIT_CHECK(count >= 2, "gaussian stats need N >= 2, got " + std::to_string(count));
  FIDKIT_CHECK(cov.rows() == mean.size() && cov.cols() == mean.size(),
               "covariance shape does not match mean dimension");
  FIDKIT_CHECK(mean.allFinite() && cov.allFinite(), "gaussian stats are not finite");
  FIDKIT_CHECK((cov - cov.transpose()).cwiseAbs().maxCoeff() <= 1e-10,
               "covariance is not symmetric");
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= static_cast<std::size_t>(kPairwiseLeaf)) {
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc;
  }
  const std::size_t mid = values.size() / 2;
  return pairwise_sum(values.first(mid)) + pairwise_sum(values.subspan(mid));
}

GaussianStats fit_gaussian_rows(const FeatureMatrix& feats) {
  const Eigen::Index n = feats.rows();
  FIDKIT_CHECK(n >= 2, "fit_gaussian: need at least 2 samples, got " + std::to_string(n));
  FIDKIT_CHECK(all_finite(feats), "fit_gaussian: non-finite features");

  const FeatureMatrix rows = sorted_rows(feats);
  GaussianStats g;
  g.count = static_cast<std::uint64_t>(n);
  g.mean = (pairwise_row_sum(rows, 0, n) / static_cast<double>(n)).transpose();
  // One correction pass removes the rounding error of the first mean.
  {
    const FeatureMatrix residual = rows.rowwise() - g.mean.transpose();
    g.mean += (pairwise_row_sum(residual, 0, n) / static_cast<double>(n)).transpose();
  }

  const FeatureMatrix centered = rows.rowwise() - g.mean.transpose();
  std::vector<Eigen::MatrixXd> partial;
  for (Eigen::Index lo = 0; lo < n; lo += kRowBlock) {
    const auto block = centered.middleRows(lo, std::min(kRowBlock, n - lo));
    partial.push_back(block.transpose() * block);
  }
  Eigen::MatrixXd cov = pairwise_reduce(partial, 0, partial.size());
  cov /= static_cast<double>(n - 1);
  g.cov = symmetrized(cov);
  return g;
}

MatrixSqrt sqrtm_product(const Eigen::MatrixXd& cov1, const Eigen::MatrixXd& cov2) {
  check_covariance(cov1, "sqrtm_product: first covariance");
  check_covariance(cov2, "sqrtm_product: second covariance");
  FIDKIT_CHECK(cov1.rows() == cov2.rows(), "sqrtm_product: dimension mismatch");
  const Eigen::Index d = cov1.rows();

  auto attempt = [&](double eps, MatrixSqrt* out) {
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
    const PsdRoot a = psd_sqrt(cov1 + eps * id);
    if (!a.ok) return false;
    check_psd(a, "sqrtm_product: first covariance");
    const PsdRoot s = psd_sqrt(symmetrized(a.root * (cov2 + eps * id) * a.root));
    if (!s.ok) return false;
    check_psd(s, "sqrtm_product: second covariance (as seen through the first)");
    out->root = s.root;
    out->epsilon = eps;
    return true;
  };

  MatrixSqrt result;
  if (attempt(0.0, &result)) return result;
  const double eps = 1e-6 * (cov1.diagonal().mean() + cov2.diagonal().mean()) / 2.0;
  if (attempt(eps, &result)) return result;
  throw Error("sqrtm_product: eigendecomposition failed after diagonal loading eps=" +
              std::to_string(eps));
}

FrechetResult frechet(const GaussianStats& a, const GaussianStats& b) {
  FIDKIT_CHECK(a.dim() == b.dim(), "frechet_distance: dimension mismatch " +
                                       std::to_string(a.dim()) + " vs " +
                                       std::to_string(b.dim()));
  a.validate();
  b.validate();
  FrechetResult r;
  if (a.mean == b.mean && a.cov == b.cov) return r;
  if (stats_less(b, a)) return frechet(b, a);
  const MatrixSqrt s = sqrtm_product(a.cov, b.cov);
  const double tr_a = a.cov.trace(), tr_b = b.cov.trace();
  r.mean_term = (a.mean - b.mean).squaredNorm();
  r.trace_term = tr_a + tr_b - 2.0 * s.root.trace();
  r.epsilon = s.epsilon;
  r.value = r.mean_term + r.trace_term;
  FIDKIT_CHECK(std::isfinite(r.value), "frechet_distance: non-finite result");
  if (r.value < 0.0) {
    const double tol = 1e-8 * std::max(1.0, tr_a + tr_b);
    if (r.value < -tol) {
      throw Error("frechet_distance: negative result " + std::to_string(r.value) +
                  " beyond round-off tolerance");
    }
    r.value = 0.0;
  }
  return r;
}

double kid_full(const FeatureMatrix& x, const FeatureMatrix& y) {
  check_kid_inputs(x, y);
  if (matrix_less(y, x)) return mmd2_unbiased(y, x);
  return mmd2_unbiased(x, y);
}

double kid_subsets(const FeatureMatrix& x, const FeatureMatrix& y, int subsets,
                   int subset_size, std::uint64_t seed) {
  check_kid_inputs(x, y);
  if (matrix_less(y, x)) return kid_subsets(y, x, subsets, subset_size, seed);
  FIDKIT_CHECK(subsets >= 1, "kid: subsets must be >= 1");
  FIDKIT_CHECK(subset_size >= 2 && subset_size <= x.rows() && subset_size <= y.rows(),
               "kid: subset size must be in [2, min(n, m)]");
  Rng rng(seed);
  auto draw = [&](const FeatureMatrix& m) {
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(m.rows()));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    // Partial Fisher-Yates.
    for (int i = 0; i < subset_size; ++i) {
      const auto j = i + static_cast<Eigen::Index>(rng.below(idx.size() - i));
      std::swap(idx[i], idx[j]);
    }
    FeatureMatrix out(subset_size, m.cols());
    for (int i = 0; i < subset_size; ++i) out.row(i) = m.row(idx[i]);
    return out;
  };
  std::vector<double> values;
  for (int s = 0; s < subsets; ++s) {
    const FeatureMatrix xs = draw(x);
    const FeatureMatrix ys = draw(y);
    values.push_back(kid_full(xs, ys));
  }
  return pairwise_sum(values) / static_cast<double>(subsets);
}

}  // namespace fidkit
