#pragma once

#include <array>
#include <vector>

#include "csippp/core/binary_io.hpp"
#include "csippp/csi/transform.hpp"

namespace csippp {

// CSID1: "CSID1", u32 num_samples, u32 Ns, u32 Nt, u8 dtype (0 = f32
// complex interleaved), then the payload sample-major, row-major, re/im
// interleaved. Little-endian, no padding.
inline constexpr std::array<char, 5> kDatasetMagic{'C', 'S', 'I', 'D', '1'};
inline constexpr std::size_t kDatasetHeaderSize = 5 + 4 + 4 + 4 + 1;

struct DatasetHeader {
  std::uint32_t num_samples = 0;
  std::uint32_t ns = 0;
  std::uint32_t nt = 0;
  std::uint8_t dtype = 0;

  std::size_t payload_bytes() const {
    return static_cast<std::size_t>(num_samples) * ns * nt * 2 * sizeof(float);
  }
};

inline std::vector<std::uint8_t> encode_dataset(const std::vector<ChannelSample>& samples) {
  ByteWriter w;
  w.raw(kDatasetMagic.data(), kDatasetMagic.size());
  const std::uint32_t ns = samples.empty() ? 0 : static_cast<std::uint32_t>(samples[0].spatial_freq.rows());
  const std::uint32_t nt = samples.empty() ? 0 : static_cast<std::uint32_t>(samples[0].spatial_freq.cols());
  w.put<std::uint32_t>(static_cast<std::uint32_t>(samples.size()));
  w.put<std::uint32_t>(ns);
  w.put<std::uint32_t>(nt);
  w.put<std::uint8_t>(0);
  for (const auto& s : samples) {
    if (s.spatial_freq.rows() != ns || s.spatial_freq.cols() != nt)
      throw InvalidShape("encode_dataset: samples must share Ns x Nt");
    for (Eigen::Index i = 0; i < s.spatial_freq.size(); ++i) {
      w.put<float>(static_cast<float>(s.spatial_freq.data()[i].real()));
      w.put<float>(static_cast<float>(s.spatial_freq.data()[i].imag()));
    }
  }
  return std::move(w.bytes());
}

inline DatasetHeader decode_dataset_header(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kDatasetMagic.size()) throw BadMagic("CSID1: file too short for magic");
  ByteReader r(bytes, "CSID1");
  std::array<char, 5> magic{};
  r.raw(magic.data(), magic.size());
  if (magic != kDatasetMagic) throw BadMagic("CSID1: bad magic");
  DatasetHeader h;
  h.num_samples = r.get<std::uint32_t>();
  h.ns = r.get<std::uint32_t>();
  h.nt = r.get<std::uint32_t>();
  h.dtype = r.get<std::uint8_t>();
  if (h.dtype != 0) throw UnknownDtype("CSID1: unknown dtype " + std::to_string(h.dtype));
  return h;
}

inline std::vector<ChannelSample> decode_dataset(const std::vector<std::uint8_t>& bytes) {
  const DatasetHeader h = decode_dataset_header(bytes);
  const std::size_t expected = kDatasetHeaderSize + h.payload_bytes();
  if (bytes.size() < expected)
    throw TruncatedFile("CSID1: truncated payload, expected " + std::to_string(expected) +
                            " bytes, got " + std::to_string(bytes.size()),
                        expected, bytes.size());
  if (bytes.size() > expected) throw FormatError("CSID1: trailing bytes after payload");

  std::vector<ChannelSample> out(h.num_samples);
  const float* p = reinterpret_cast<const float*>(bytes.data() + kDatasetHeaderSize);
  std::vector<float> buf(static_cast<std::size_t>(h.ns) * h.nt * 2);
  for (auto& s : out) {
    std::memcpy(buf.data(), p, buf.size() * sizeof(float));
    p += buf.size();
    s.spatial_freq.resize(h.ns, h.nt);
    for (Eigen::Index i = 0; i < s.spatial_freq.size(); ++i)
      s.spatial_freq.data()[i] = Complex(buf[static_cast<std::size_t>(2 * i)], buf[static_cast<std::size_t>(2 * i + 1)]);
  }
  return out;
}

inline std::vector<ChannelSample> load_dataset(const std::filesystem::path& path) {
  return decode_dataset(read_file_bytes(path));
}

inline void save_dataset(const std::vector<ChannelSample>& samples, const std::filesystem::path& path) {
  write_file_bytes(path, encode_dataset(samples));
}

}  // namespace csippp
