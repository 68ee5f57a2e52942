#pragma once

#include "csippp/solver/least_squares.hpp"

namespace csippp {

struct InitResult {
  RealVector h0;
  std::vector<Eigen::Index> support;
  bool regularized = false;
};

/// Non-iterative starting point: keep the K largest-magnitude entries of
/// A^T y as the support and least-squares fit y on it.
inline InitResult init_support_ls(const RealMatrix& a, const RealVector& y, Eigen::Index k) {
  if (y.size() != a.rows()) throw InvalidArgument("init_support_ls: y length must equal M");
  if (k < 1 || k > a.rows()) throw InvalidArgument("init_support_ls: need 1 <= K <= M");
  const RealVector corr = a.transpose() * y;
  InitResult out{RealVector::Zero(a.cols()), top_k_indices(corr, k), false};
  const auto fit = solve_on_support(a, y, out.support);
  for (std::size_t j = 0; j < out.support.size(); ++j)
    out.h0(out.support[j]) = fit.coefficients(static_cast<Eigen::Index>(j));
  out.regularized = fit.regularized;
  return out;
}

}  // namespace csippp
