#pragma once

#include <numbers>

#include "csippp/core/types.hpp"

namespace csippp {

/// Unitary n-point DFT matrix, F[j,k] = exp(-2*pi*i*j*k/n) / sqrt(n).
inline ComplexMatrix dft_matrix(Eigen::Index n) {
  if (n < 1) throw InvalidArgument("dft_matrix: n must be >= 1");
  ComplexMatrix f(n, n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      // Reduce j*k mod n first so large products keep full phase accuracy.
      const auto r = static_cast<double>((j * k) % n);
      const double phase = -2.0 * std::numbers::pi * r / static_cast<double>(n);
      f(j, k) = std::polar(scale, phase);
    }
  }
  return f;
}

}  // namespace csippp
