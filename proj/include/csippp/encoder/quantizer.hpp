#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "csippp/core/types.hpp"

namespace csippp {

struct QuantizerConfig {
  double mu = 200.0;
  int bits = 4;
  double clip = 1.0;

  void validate() const {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidArgument("quantizer: mu must be > 0");
    if (bits < 2 || bits > 16) throw InvalidArgument("quantizer: bits must be in [2, 16]");
    if (!(clip > 0.0) || !std::isfinite(clip)) throw InvalidArgument("quantizer: clip must be > 0");
  }
  std::uint32_t levels() const { return 1u << bits; }
};

// mu-law compander on [-clip, clip] -> [-1, 1]. Inputs are clipped first.
inline double mu_law_compress(double x, const QuantizerConfig& q) {
  const double u = std::clamp(x / q.clip, -1.0, 1.0);
  return std::copysign(std::log1p(q.mu * std::abs(u)) / std::log1p(q.mu), u);
}

inline double mu_law_expand(double c, const QuantizerConfig& q) {
  const double mag = std::expm1(std::abs(c) * std::log1p(q.mu)) / q.mu;
  return q.clip * std::copysign(mag, c);
}

// Midrise uniform quantizer on the companded value: step 2 / 2^B,
// code = floor((c + 1) / step) clamped to [0, 2^B - 1].
inline std::uint32_t quantize_one(double x, const QuantizerConfig& q) {
  const double c = mu_law_compress(x, q);
  const double step = 2.0 / q.levels();
  const double cell = std::floor((c + 1.0) / step);
  return static_cast<std::uint32_t>(std::clamp(cell, 0.0, static_cast<double>(q.levels() - 1)));
}

inline double dequantize_one(std::uint32_t code, const QuantizerConfig& q) {
  if (code >= q.levels()) throw InvalidArgument("dequantize: code out of range");
  const double step = 2.0 / q.levels();
  return mu_law_expand(-1.0 + (static_cast<double>(code) + 0.5) * step, q);
}

inline std::vector<std::uint32_t> quantize(const RealVector& y, const QuantizerConfig& q) {
  q.validate();
  if (!all_finite(y)) throw InvalidArgument("quantize: non-finite input");
  std::vector<std::uint32_t> codes(static_cast<std::size_t>(y.size()));
  for (Eigen::Index i = 0; i < y.size(); ++i) codes[static_cast<std::size_t>(i)] = quantize_one(y(i), q);
  return codes;
}

inline RealVector dequantize(const std::vector<std::uint32_t>& codes, const QuantizerConfig& q) {
  q.validate();
  RealVector y(static_cast<Eigen::Index>(codes.size()));
  for (std::size_t i = 0; i < codes.size(); ++i) y(static_cast<Eigen::Index>(i)) = dequantize_one(codes[i], q);
  return y;
}

}  // namespace csippp
