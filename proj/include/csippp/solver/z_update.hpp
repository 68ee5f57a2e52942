#pragma once

#include <Eigen/Cholesky>

#include "csippp/core/types.hpp"

namespace csippp {

enum class ZPath : std::uint8_t { direct, woodbury };

/// z = (A^T A + rho I)^{-1} (A^T y + rho h).
///
/// direct: Cholesky on the N x N system, valid for any A.
/// woodbury: assumes A A^T = I, where the inverse collapses to
///   (1/rho) (I - A^T A / (1 + rho)). Evaluated as h + A^T (y - A h) / (1 + rho),
///   which is the same quantity without the 1/rho cancellation at small rho.
inline RealVector z_update(const RealMatrix& a, const RealVector& y, const RealVector& h, double rho,
                           ZPath path = ZPath::woodbury) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw InvalidArgument("z_update: rho must be finite and > 0");
  if (y.size() != a.rows() || h.size() != a.cols()) throw InvalidArgument("z_update: dimension mismatch");
  if (path == ZPath::woodbury) {
    const RealVector r = y - a * h;
    return h + (a.transpose() * r) / (1.0 + rho);
  }
  Eigen::MatrixXd lhs = a.transpose() * a;
  lhs.diagonal().array() += rho;
  const RealVector rhs = a.transpose() * y + rho * h;
  return Eigen::LLT<Eigen::MatrixXd>(lhs).solve(rhs);
}

}  // namespace csippp
