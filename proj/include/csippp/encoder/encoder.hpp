#pragma once

#include "csippp/csi/transform.hpp"
#include "csippp/encoder/projection.hpp"
#include "csippp/encoder/quantizer.hpp"

namespace csippp {

struct Feedback {
  RealVector values;
  std::optional<std::vector<std::uint32_t>> codes;
  std::optional<QuantizerConfig> quant;
};

inline Feedback compress(const ProjectionCode& a, const RealVector& h) {
  if (h.size() != a.cols())
    throw InvalidArgument("compress: CSI vector length " + std::to_string(h.size()) +
                          " != N = " + std::to_string(a.cols()));
  return Feedback{a.matrix() * h, std::nullopt, std::nullopt};
}

inline Feedback compress(const ProjectionCode& a, const CsiVector& h) {
  return compress(a, h.values);
}

/// Replaces the raw values with their quantize/dequantize reconstruction
/// and records the codes.
inline Feedback quantize_feedback(const Feedback& raw, const QuantizerConfig& q) {
  auto codes = quantize(raw.values, q);
  RealVector values = dequantize(codes, q);
  return Feedback{std::move(values), std::move(codes), q};
}

}  // namespace csippp
