#pragma once

#include "csippp/solver/least_squares.hpp"

namespace csippp {

/// Orthogonal matching pursuit: up to K greedy picks of the column most
/// correlated with the residual, re-fitting all coefficients by least
/// squares after each pick. Stops early once no unused column has
/// nonzero correlation.
inline RealVector omp_baseline(const RealMatrix& a, const RealVector& y, Eigen::Index k) {
  if (y.size() != a.rows()) throw InvalidArgument("omp_baseline: y length must equal M");
  if (k < 1 || k > a.rows()) throw InvalidArgument("omp_baseline: need 1 <= K <= M");
  RealVector x = RealVector::Zero(a.cols());
  std::vector<Eigen::Index> support;
  std::vector<bool> used(static_cast<std::size_t>(a.cols()), false);
  RealVector residual = y;
  RealVector coef;
  for (Eigen::Index step = 0; step < k; ++step) {
    const RealVector corr = a.transpose() * residual;
    Eigen::Index best = -1;
    double best_mag = 0.0;
    for (Eigen::Index j = 0; j < corr.size(); ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      if (std::abs(corr(j)) > best_mag) {
        best_mag = std::abs(corr(j));
        best = j;
      }
    }
    if (best < 0) break;
    used[static_cast<std::size_t>(best)] = true;
    support.push_back(best);
    coef = solve_on_support(a, y, support).coefficients;
    residual = y;
    for (std::size_t j = 0; j < support.size(); ++j)
      residual -= coef(static_cast<Eigen::Index>(j)) * a.col(support[j]);
  }
  for (std::size_t j = 0; j < support.size(); ++j) x(support[j]) = coef(static_cast<Eigen::Index>(j));
  return x;
}

}  // namespace csippp
