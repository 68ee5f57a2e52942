#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>

#include "csippp/core/orthonormal.hpp"
#include "csippp/core/rng.hpp"

namespace csippp {

/// Seeded row-orthonormal projection A (M x N). Only (seed, M, N, method)
/// is ever exchanged; the matrix is rebuilt on demand and cached.
class ProjectionCode {
public:
  static constexpr std::size_t kSerializedSize = 18;
  static constexpr std::uint8_t kFormatVersion = 1;

  ProjectionCode(std::uint64_t seed, Eigen::Index m, Eigen::Index n, OrthoMethod method)
      : seed_(seed), m_(m), n_(n), method_(method), cache_(std::make_shared<Cache>()) {
    if (m < 1 || n < 1 || m > n) throw InvalidArgument("ProjectionCode: need 1 <= M <= N");
    if (n > static_cast<Eigen::Index>(UINT32_MAX)) throw InvalidArgument("ProjectionCode: N too large");
  }

  std::uint64_t seed() const noexcept { return seed_; }
  Eigen::Index rows() const noexcept { return m_; }
  Eigen::Index cols() const noexcept { return n_; }
  OrthoMethod method() const noexcept { return method_; }
  double ratio() const noexcept { return static_cast<double>(m_) / static_cast<double>(n_); }

  const RealMatrix& matrix() const {
    std::call_once(cache_->once, [this] { cache_->matrix = build(); });
    return cache_->matrix;
  }

  // Layout (little-endian): u8 version, u64 seed, u32 M, u32 N, u8 method.
  std::array<std::uint8_t, kSerializedSize> serialize() const {
    std::array<std::uint8_t, kSerializedSize> out{};
    out[0] = kFormatVersion;
    put(out.data() + 1, seed_, 8);
    put(out.data() + 9, static_cast<std::uint64_t>(m_), 4);
    put(out.data() + 13, static_cast<std::uint64_t>(n_), 4);
    out[17] = static_cast<std::uint8_t>(method_);
    return out;
  }

  static ProjectionCode deserialize(const std::array<std::uint8_t, kSerializedSize>& in) {
    if (in[0] != kFormatVersion) throw FormatError("ProjectionCode: unsupported version");
    if (in[17] > 1) throw FormatError("ProjectionCode: unknown method tag");
    return ProjectionCode(get(in.data() + 1, 8), static_cast<Eigen::Index>(get(in.data() + 9, 4)),
                          static_cast<Eigen::Index>(get(in.data() + 13, 4)),
                          static_cast<OrthoMethod>(in[17]));
  }

private:
  struct Cache {
    std::once_flag once;
    RealMatrix matrix;
  };

  RealMatrix build() const {
    SeededRng rng(seed_);
    if (method_ == OrthoMethod::svd) {
      return orthonormal_rows(gaussian_matrix(rng, n_, n_), OrthoMethod::svd, m_);
    }
    return orthonormal_rows(gaussian_matrix(rng, m_, n_), OrthoMethod::qr);
  }

  static void put(std::uint8_t* p, std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) p[i] = static_cast<std::uint8_t>(v >> (8 * i));
  }
  static std::uint64_t get(const std::uint8_t* p, int bytes) {
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    return v;
  }

  std::uint64_t seed_;
  Eigen::Index m_;
  Eigen::Index n_;
  OrthoMethod method_;
  std::shared_ptr<Cache> cache_;
};

inline ProjectionCode generate_projection(std::uint64_t seed, Eigen::Index m, Eigen::Index n,
                                          OrthoMethod method) {
  ProjectionCode code(seed, m, n, method);
  code.matrix();
  return code;
}

/// M for a compression ratio, rounded to the nearest integer and at least 1.
inline Eigen::Index rows_for_ratio(double cr, Eigen::Index n) {
  if (!(cr > 0.0 && cr <= 1.0)) throw InvalidArgument("compression ratio must be in (0, 1]");
  const auto m = static_cast<Eigen::Index>(std::llround(cr * static_cast<double>(n)));
  return std::clamp<Eigen::Index>(m, 1, n);
}

}  // namespace csippp
