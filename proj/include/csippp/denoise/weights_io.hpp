#pragma once

#include <array>

#include "csippp/core/binary_io.hpp"
#include "csippp/denoise/cnn.hpp"

namespace csippp {

// PPPW1: "PPPW1", u32 layer_count, then per layer u32 in_ch, u32 out_ch,
// u32 kernel, u8 activation, f32 weights [out][in][k][k], f32 bias[out].
inline constexpr std::array<char, 5> kWeightsMagic{'P', 'P', 'P', 'W', '1'};

inline std::vector<std::uint8_t> encode_weights(const DenoiserModel& model) {
  ByteWriter w;
  w.raw(kWeightsMagic.data(), kWeightsMagic.size());
  w.put<std::uint32_t>(static_cast<std::uint32_t>(model.layers.size()));
  for (const auto& l : model.layers) {
    w.put<std::uint32_t>(l.in_ch);
    w.put<std::uint32_t>(l.out_ch);
    w.put<std::uint32_t>(l.kernel);
    w.put<std::uint8_t>(static_cast<std::uint8_t>(l.activation));
    w.raw(l.weights.data(), l.weights.size() * sizeof(float));
    w.raw(l.bias.data(), l.bias.size() * sizeof(float));
  }
  return std::move(w.bytes());
}

inline DenoiserModel decode_weights(const std::vector<std::uint8_t>& bytes) {
  ByteReader r(bytes, "PPPW1");
  std::array<char, 5> magic{};
  if (bytes.size() < magic.size()) throw BadMagic("PPPW1: file too short for magic");
  r.raw(magic.data(), magic.size());
  if (magic != kWeightsMagic) throw BadMagic("PPPW1: bad magic");

  const auto count = r.get<std::uint32_t>();
  DenoiserModel model;
  for (std::uint32_t k = 0; k < count; ++k) {
    ConvLayer l;
    l.in_ch = r.get<std::uint32_t>();
    l.out_ch = r.get<std::uint32_t>();
    l.kernel = r.get<std::uint32_t>();
    const auto act = r.get<std::uint8_t>();
    if (act > 2) throw BadActivation("PPPW1: layer " + std::to_string(k) + " has unknown activation tag");
    l.activation = static_cast<Activation>(act);
    if (l.kernel != 3) throw ChannelMismatch("PPPW1: layer " + std::to_string(k) + " kernel must be 3");
    const std::uint64_t nw = std::uint64_t{l.in_ch} * l.out_ch * 9;
    r.require(static_cast<std::size_t>((nw + l.out_ch) * sizeof(float)));
    l.weights.resize(static_cast<std::size_t>(nw));
    l.bias.resize(l.out_ch);
    r.raw(l.weights.data(), l.weights.size() * sizeof(float));
    r.raw(l.bias.data(), l.bias.size() * sizeof(float));
    model.layers.push_back(std::move(l));
  }
  if (r.remaining() != 0) throw FormatError("PPPW1: trailing bytes after last layer");
  validate(model);
  return model;
}

inline DenoiserModel load_weights(const std::filesystem::path& path) {
  return decode_weights(read_file_bytes(path));
}

inline void save_weights(const DenoiserModel& model, const std::filesystem::path& path) {
  validate(model);
  write_file_bytes(path, encode_weights(model));
}

}  // namespace csippp
