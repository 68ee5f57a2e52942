#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "csippp/core/dft.hpp"

namespace csippp {

struct ChannelSample {
  ComplexMatrix spatial_freq;  // Ns x Nt, rows are subcarriers
  std::string meta;
};

struct TruncatedChannel {
  ComplexMatrix angular_delay;  // Nd x Nt, normalized
  double scale = 1.0;
  Eigen::Index ns_full = 0;
};

// Real-domain CSI vector: all real parts row-major, then all imaginary parts.
struct CsiVector {
  RealVector values;
  Eigen::Index nd = 0;
  Eigen::Index nt = 0;
};

namespace detail {

// DFT matrices are immutable once built; share one per size.
inline const ComplexMatrix& cached_dft(Eigen::Index n) {
  static std::mutex mu;
  static std::map<Eigen::Index, std::unique_ptr<const ComplexMatrix>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<const ComplexMatrix>(dft_matrix(n));
  return *slot;
}

}  // namespace detail

/// H = F_s * H~ * F_t with unitary DFTs.
inline ComplexMatrix to_angular_delay(const ComplexMatrix& spatial_freq) {
  const auto& fs = detail::cached_dft(spatial_freq.rows());
  const auto& ft = detail::cached_dft(spatial_freq.cols());
  return fs * spatial_freq * ft;
}

inline ComplexMatrix to_angular_delay(const ChannelSample& sample) {
  return to_angular_delay(sample.spatial_freq);
}

/// H~ = F_s^H * H * F_t^H.
inline ComplexMatrix to_spatial_freq(const ComplexMatrix& angular_delay) {
  const auto& fs = detail::cached_dft(angular_delay.rows());
  const auto& ft = detail::cached_dft(angular_delay.cols());
  return fs.adjoint() * angular_delay * ft.adjoint();
}

inline ComplexMatrix truncate_delay(const ComplexMatrix& h, Eigen::Index nd) {
  if (nd < 1 || nd > h.rows()) throw InvalidArgument("truncate_delay: need 1 <= Nd <= Ns");
  return h.topRows(nd);
}

/// Fraction of the Frobenius energy held by the first nd delay rows.
inline double retained_energy(const ComplexMatrix& h, Eigen::Index nd) {
  const double total = h.squaredNorm();
  if (total == 0.0) throw DegenerateSample("retained_energy: zero matrix");
  return truncate_delay(h, nd).squaredNorm() / total;
}

inline ComplexMatrix zero_pad_delay(const ComplexMatrix& truncated, Eigen::Index ns) {
  if (ns < truncated.rows()) throw InvalidArgument("zero_pad_delay: Ns < Nd");
  ComplexMatrix out = ComplexMatrix::Zero(ns, truncated.cols());
  out.topRows(truncated.rows()) = truncated;
  return out;
}

/// Scales by the largest real or imaginary magnitude so every component
/// lies in [-1, 1].
inline TruncatedChannel normalize(const ComplexMatrix& truncated, Eigen::Index ns_full = 0) {
  double scale = 0.0;
  for (Eigen::Index i = 0; i < truncated.size(); ++i) {
    const Complex v = truncated.data()[i];
    scale = std::max({scale, std::abs(v.real()), std::abs(v.imag())});
  }
  if (scale == 0.0) throw DegenerateSample("normalize: all-zero channel");
  return {truncated / scale, scale, ns_full > 0 ? ns_full : truncated.rows()};
}

inline ComplexMatrix denormalize(const ComplexMatrix& normalized, double scale) {
  return normalized * scale;
}

inline ComplexMatrix denormalize(const TruncatedChannel& tc) {
  return denormalize(tc.angular_delay, tc.scale);
}

inline CsiVector vectorize(const ComplexMatrix& m) {
  const Eigen::Index n = m.size();
  CsiVector v{RealVector(2 * n), m.rows(), m.cols()};
  for (Eigen::Index i = 0; i < n; ++i) {
    v.values(i) = m.data()[i].real();
    v.values(n + i) = m.data()[i].imag();
  }
  return v;
}

inline CsiVector vectorize(const TruncatedChannel& tc) { return vectorize(tc.angular_delay); }

inline ComplexMatrix devectorize(const RealVector& v, Eigen::Index nd, Eigen::Index nt) {
  if (nd < 1 || nt < 1 || v.size() != 2 * nd * nt)
    throw InvalidArgument("devectorize: length " + std::to_string(v.size()) +
                          " does not match 2*Nd*Nt");
  const Eigen::Index n = nd * nt;
  ComplexMatrix m(nd, nt);
  for (Eigen::Index i = 0; i < n; ++i) m.data()[i] = Complex(v(i), v(n + i));
  return m;
}

inline ComplexMatrix devectorize(const CsiVector& v) { return devectorize(v.values, v.nd, v.nt); }

// Vector <-> denoiser tensor: (i, j, 0) = Re H(i, j), (i, j, 1) = Im H(i, j).
inline RealTensor3 vector_to_tensor(const RealVector& v, Eigen::Index nd, Eigen::Index nt) {
  if (v.size() != 2 * nd * nt) throw InvalidArgument("vector_to_tensor: length mismatch");
  RealTensor3 t(static_cast<std::size_t>(nd), static_cast<std::size_t>(nt), 2);
  const Eigen::Index n = nd * nt;
  for (Eigen::Index i = 0; i < n; ++i) {
    t.data()[2 * i] = v(i);
    t.data()[2 * i + 1] = v(n + i);
  }
  return t;
}

inline RealVector tensor_to_vector(const RealTensor3& t) {
  if (t.d2() != 2) throw InvalidShape("tensor_to_vector: expected 2 channels");
  const auto n = static_cast<Eigen::Index>(t.d0() * t.d1());
  RealVector v(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = t.data()[2 * i];
    v(n + i) = t.data()[2 * i + 1];
  }
  return v;
}

}  // namespace csippp
