#pragma once

#include <limits>
#include <string_view>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "csippp/core/types.hpp"

namespace csippp {

enum class OrthoMethod : std::uint8_t { svd = 0, qr = 1 };

inline std::string_view to_string(OrthoMethod m) {
  return m == OrthoMethod::svd ? "svd" : "qr";
}

inline OrthoMethod ortho_method_from_string(std::string_view s) {
  if (s == "svd") return OrthoMethod::svd;
  if (s == "qr") return OrthoMethod::qr;
  throw InvalidArgument("unknown orthonormalization method '" + std::string(s) + "'");
}

namespace detail {

inline double rank_tolerance(Eigen::Index rows, Eigen::Index cols) {
  return static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon();
}

}  // namespace detail

/// Returns an m x N matrix with orthonormal rows built from `source`.
///
/// qr: Gram-Schmidt-equivalent orthonormalization of the first m rows of
///     `source` (signs fixed so the triangular factor has a positive
///     diagonal; rows that are already orthonormal come back unchanged).
/// svd: the m right singular vectors of `source` with the largest singular
///     values, each sign-normalized so its largest-magnitude entry is positive.
///
/// m defaults to source.rows(). Throws DegenerateSource when the rows that
/// are consumed are rank deficient.
inline RealMatrix orthonormal_rows(const RealMatrix& source, OrthoMethod method,
                                   Eigen::Index m = -1) {
  const Eigen::Index n = source.cols();
  if (m < 0) m = source.rows();
  if (m < 1 || m > n)
    throw InvalidArgument("orthonormal_rows: need 1 <= m <= cols");
  if (!all_finite(source)) throw InvalidArgument("orthonormal_rows: non-finite source");

  if (method == OrthoMethod::qr) {
    if (m > source.rows()) throw InvalidArgument("orthonormal_rows: source has fewer than m rows");
    const Eigen::MatrixXd g = source.topRows(m).transpose();  // n x m
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    const Eigen::MatrixXd r = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
    const double scale = r.diagonal().cwiseAbs().maxCoeff();
    if (!(scale > 0.0)) throw DegenerateSource("orthonormal_rows: zero source rows");
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, m);
    for (Eigen::Index k = 0; k < m; ++k) {
      if (std::abs(r(k, k)) <= detail::rank_tolerance(n, m) * scale)
        throw DegenerateSource("orthonormal_rows: source rows are rank deficient");
      if (r(k, k) < 0.0) q.col(k) = -q.col(k);
    }
    return q.transpose();
  }

  Eigen::BDCSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(source), Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  if (s.size() < m) throw InvalidArgument("orthonormal_rows: source rank bound below m");
  if (!(s(0) > 0.0) || s(m - 1) <= detail::rank_tolerance(source.rows(), n) * s(0))
    throw DegenerateSource("orthonormal_rows: source has fewer than m significant singular values");
  RealMatrix a = svd.matrixV().leftCols(m).transpose();
  for (Eigen::Index k = 0; k < m; ++k) {
    Eigen::Index arg = 0;
    a.row(k).cwiseAbs().maxCoeff(&arg);
    if (a(k, arg) < 0.0) a.row(k) = -a.row(k);
  }
  return a;
}

}  // namespace csippp
