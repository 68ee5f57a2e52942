#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include <Eigen/Cholesky>

#include "csippp/core/types.hpp"

namespace csippp {

struct SupportSolve {
  RealVector coefficients;   // length |support|
  bool regularized = false;  // ridge fallback was needed
};

/// min ||y - A_S x||_2 through the normal equations. Falls back to
/// (A_S^T A_S + 1e-10 I) when the Gram matrix is numerically singular.
inline SupportSolve solve_on_support(const RealMatrix& a, const RealVector& y,
                                     const std::vector<Eigen::Index>& support) {
  const auto k = static_cast<Eigen::Index>(support.size());
  Eigen::MatrixXd as(a.rows(), k);
  for (Eigen::Index j = 0; j < k; ++j) as.col(j) = a.col(support[static_cast<std::size_t>(j)]);
  const Eigen::MatrixXd gram = as.transpose() * as;
  const RealVector rhs = as.transpose() * y;

  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() == Eigen::Success && llt.rcond() > 1e-13) return {llt.solve(rhs), false};

  Eigen::LDLT<Eigen::MatrixXd> ridge(gram + 1e-10 * Eigen::MatrixXd::Identity(k, k));
  return {ridge.solve(rhs), true};
}

/// Indices of the k largest |v_i|, ties broken by lowest index, returned in
/// ascending index order.
inline std::vector<Eigen::Index> top_k_indices(const RealVector& v, Eigen::Index k) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(v.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::partial_sort(idx.begin(), idx.begin() + k, idx.end(), [&v](Eigen::Index a, Eigen::Index b) {
    const double fa = std::abs(v(a));
    const double fb = std::abs(v(b));
    return fa > fb || (fa == fb && a < b);
  });
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace csippp
