#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "csippp/core/error.hpp"

namespace csippp {

static_assert(std::endian::native == std::endian::little,
              "binary formats are little-endian; big-endian hosts need byte swapping");

inline std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

inline void write_file_bytes(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

class ByteWriter {
public:
  void raw(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    buf_.insert(buf_.end(), b, b + n);
  }
  template <typename T>
  void put(T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    raw(&v, sizeof(T));
  }
  std::vector<std::uint8_t>& bytes() { return buf_; }

private:
  std::vector<std::uint8_t> buf_;
};

class ByteReader {
public:
  ByteReader(const std::vector<std::uint8_t>& buf, std::string what)
      : buf_(buf), what_(std::move(what)) {}

  std::size_t remaining() const { return buf_.size() - pos_; }
  std::size_t position() const { return pos_; }

  void require(std::size_t n) const {
    if (remaining() < n)
      throw TruncatedFile(what_ + ": truncated, expected at least " + std::to_string(pos_ + n) +
                              " bytes, got " + std::to_string(buf_.size()),
                          pos_ + n, buf_.size());
  }

  void raw(void* p, std::size_t n) {
    require(n);
    std::memcpy(p, buf_.data() + pos_, n);
    pos_ += n;
  }
  template <typename T>
  T get() {
    T v{};
    raw(&v, sizeof(T));
    return v;
  }

private:
  const std::vector<std::uint8_t>& buf_;
  std::string what_;
  std::size_t pos_ = 0;
};

}  // namespace csippp
