#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "csippp/core/shuffle.hpp"
#include "csippp/core/types.hpp"

namespace csippp {

enum class Activation : std::uint8_t { relu = 0, tanh = 1, linear = 2 };

inline std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::linear: return "linear";
  }
  return "?";
}

inline double activate(Activation a, double x) {
  switch (a) {
    case Activation::relu: return x > 0.0 ? x : 0.0;
    case Activation::tanh: return std::tanh(x);
    case Activation::linear: return x;
  }
  return x;
}

/// One 3x3 "same" convolution with bias and activation. Batch norm, if the
/// trained network had it, is already folded into weights and bias.
struct ConvLayer {
  std::uint32_t in_ch = 0;
  std::uint32_t out_ch = 0;
  std::uint32_t kernel = 3;
  Activation activation = Activation::relu;
  std::vector<float> weights;  // [out][in][k][k]
  std::vector<float> bias;     // [out]

  float& weight(std::size_t o, std::size_t i, std::size_t ky, std::size_t kx) {
    return weights[((o * in_ch + i) * kernel + ky) * kernel + kx];
  }
  float weight(std::size_t o, std::size_t i, std::size_t ky, std::size_t kx) const {
    return weights[((o * in_ch + i) * kernel + ky) * kernel + kx];
  }

  bool operator==(const ConvLayer&) const = default;
};

struct DenoiserModel {
  static constexpr std::uint32_t kInputChannels = 9;
  static constexpr std::uint32_t kOutputChannels = 8;

  std::vector<ConvLayer> layers;

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.weights.size() + l.bias.size();
    return n;
  }

  bool operator==(const DenoiserModel&) const = default;
};

/// Structural checks shared by the loader and the forward pass. Throws the
/// error type named after the first violated rule.
inline void validate(const DenoiserModel& model);

inline RealTensor3 conv2d_same(const RealTensor3& input, const ConvLayer& layer) {
  if (input.d2() != layer.in_ch)
    throw InvalidArgument("conv2d_same: input has " + std::to_string(input.d2()) +
                          " channels, layer expects " + std::to_string(layer.in_ch));
  if (layer.kernel != 3) throw InvalidArgument("conv2d_same: only 3x3 kernels are supported");
  const std::size_t cin = layer.in_ch;
  const std::size_t cout = layer.out_ch;
  if (layer.weights.size() != cout * cin * 9 || layer.bias.size() != cout)
    throw InvalidArgument("conv2d_same: weight/bias size mismatch");

  // Repack to [ky][kx][in][out] so the inner loop runs over contiguous outputs.
  std::vector<double> packed(9 * cin * cout);
  for (std::size_t o = 0; o < cout; ++o)
    for (std::size_t i = 0; i < cin; ++i)
      for (std::size_t ky = 0; ky < 3; ++ky)
        for (std::size_t kx = 0; kx < 3; ++kx)
          packed[((ky * 3 + kx) * cin + i) * cout + o] = layer.weight(o, i, ky, kx);

  const std::size_t h = input.d0();
  const std::size_t w = input.d1();
  RealTensor3 out(h, w, cout);
  std::vector<double> acc(cout);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      for (std::size_t o = 0; o < cout; ++o) acc[o] = layer.bias[o];
      for (std::size_t ky = 0; ky < 3; ++ky) {
        const auto sy = static_cast<std::ptrdiff_t>(y + ky) - 1;
        if (sy < 0 || sy >= static_cast<std::ptrdiff_t>(h)) continue;
        for (std::size_t kx = 0; kx < 3; ++kx) {
          const auto sx = static_cast<std::ptrdiff_t>(x + kx) - 1;
          if (sx < 0 || sx >= static_cast<std::ptrdiff_t>(w)) continue;
          const double* src = &input.data()[(static_cast<std::size_t>(sy) * w + static_cast<std::size_t>(sx)) * cin];
          const double* wk = &packed[(ky * 3 + kx) * cin * cout];
          for (std::size_t i = 0; i < cin; ++i) {
            const double v = src[i];
            const double* wrow = wk + i * cout;
            for (std::size_t o = 0; o < cout; ++o) acc[o] += v * wrow[o];
          }
        }
      }
      double* dst = &out.data()[(y * w + x) * cout];
      for (std::size_t o = 0; o < cout; ++o) dst[o] = activate(layer.activation, acc[o]);
    }
  }
  return out;
}

/// Forward pass: unshuffle -> append constant sigma map -> conv stack ->
/// shuffle. Input is the Nd x Nt x 2 (real, imag) tensor.
inline RealTensor3 denoise_cnn(const DenoiserModel& model, const RealTensor3& z, double sigma) {
  validate(model);
  if (z.d2() != 2) throw InvalidShape("denoise_cnn: input must have 2 channels");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidArgument("noise level must be finite and >= 0");
  const RealTensor3 sub = pixel_unshuffle(z);
  RealTensor3 x(sub.d0(), sub.d1(), sub.d2() + 1);
  for (std::size_t i = 0; i < sub.d0(); ++i)
    for (std::size_t j = 0; j < sub.d1(); ++j) {
      for (std::size_t c = 0; c < sub.d2(); ++c) x(i, j, c) = sub(i, j, c);
      x(i, j, sub.d2()) = sigma;
    }
  for (const auto& layer : model.layers) x = conv2d_same(x, layer);
  return pixel_shuffle(x);
}

inline void validate(const DenoiserModel& model) {
  if (model.layers.empty()) throw ChannelMismatch("denoiser model has no layers");
  if (model.layers.front().in_ch != DenoiserModel::kInputChannels)
    throw ChannelMismatch("first layer must take 9 input channels");
  if (model.layers.back().out_ch != DenoiserModel::kOutputChannels)
    throw ChannelMismatch("last layer must produce 8 output channels");
  if (model.layers.back().activation != Activation::tanh)
    throw BadActivation("last layer must use tanh");
  for (std::size_t k = 0; k < model.layers.size(); ++k) {
    const auto& l = model.layers[k];
    if (l.kernel != 3) throw ChannelMismatch("layer " + std::to_string(k) + ": kernel must be 3");
    if (k > 0 && l.in_ch != model.layers[k - 1].out_ch)
      throw ChannelMismatch("layer " + std::to_string(k) + ": in_ch does not match previous out_ch");
    if (l.weights.size() != static_cast<std::size_t>(l.out_ch) * l.in_ch * 9 ||
        l.bias.size() != l.out_ch)
      throw ChannelMismatch("layer " + std::to_string(k) + ": parameter count mismatch");
    for (float v : l.weights)
      if (!std::isfinite(v)) throw NonFiniteWeights("layer " + std::to_string(k) + ": non-finite weight");
    for (float v : l.bias)
      if (!std::isfinite(v)) throw NonFiniteWeights("layer " + std::to_string(k) + ": non-finite bias");
  }
}

}  // namespace csippp
