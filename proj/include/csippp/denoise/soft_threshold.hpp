#pragma once

#include "csippp/core/types.hpp"

namespace csippp {

// Proximal operator of tau * ||.||_1.
inline RealVector soft_threshold(const RealVector& z, double tau) {
  if (!(tau >= 0.0)) throw InvalidArgument("soft_threshold: tau must be >= 0");
  RealVector out(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double mag = std::abs(z(i)) - tau;
    out(i) = mag > 0.0 ? std::copysign(mag, z(i)) : 0.0;
  }
  return out;
}

/// Soft-thresholding at tau = gain * sigma.
inline RealVector denoise_soft_threshold(const RealVector& z, double sigma, double gain) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidArgument("noise level must be finite and >= 0");
  if (!(gain > 0.0)) throw InvalidArgument("soft-threshold gain must be > 0");
  return soft_threshold(z, gain * sigma);
}

}  // namespace csippp
