#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <numbers>
#include <optional>

#include "csippp/core/types.hpp"

namespace csippp {

// ChaCha20 block function (RFC 8439, 20 rounds). Produces the 16 output
// words for the given key, 32-bit block counter and 96-bit nonce.
inline std::array<std::uint32_t, 16> chacha20_block(
    const std::array<std::uint32_t, 8>& key, std::uint32_t counter,
    const std::array<std::uint32_t, 3>& nonce) {
  std::array<std::uint32_t, 16> init{0x61707865u, 0x3320646eu, 0x79622d32u,
                                     0x6b206574u};
  for (int i = 0; i < 8; ++i) init[4 + i] = key[i];
  init[12] = counter;
  init[13] = nonce[0];
  init[14] = nonce[1];
  init[15] = nonce[2];

  auto x = init;
  auto quarter = [&x](int a, int b, int c, int d) {
    x[a] += x[b]; x[d] = std::rotl(x[d] ^ x[a], 16);
    x[c] += x[d]; x[b] = std::rotl(x[b] ^ x[c], 12);
    x[a] += x[b]; x[d] = std::rotl(x[d] ^ x[a], 8);
    x[c] += x[d]; x[b] = std::rotl(x[b] ^ x[c], 7);
  };
  for (int round = 0; round < 10; ++round) {
    quarter(0, 4, 8, 12);
    quarter(1, 5, 9, 13);
    quarter(2, 6, 10, 14);
    quarter(3, 7, 11, 15);
    quarter(0, 5, 10, 15);
    quarter(1, 6, 11, 12);
    quarter(2, 7, 8, 13);
    quarter(3, 4, 9, 14);
  }
  for (int i = 0; i < 16; ++i) x[i] += init[i];
  return x;
}

/// Deterministic random stream shared by UE and BS.
///
/// The stream is ChaCha20 keyed by the seed: key words 0 and 1 hold the low
/// and high halves of the seed, key words 2..7 are zero. Block i uses the
/// 64-bit block index i split across the counter word (low half) and nonce
/// word 0 (high half); nonce words 1 and 2 are zero. Output words are
/// consumed in block order. Words are plain 32-bit integers, so the raw
/// stream is identical on every platform.
///
/// Derived values:
///  - next_u64: low word first, then high word.
///  - uniform:  ((u64 >> 11) + 1) * 2^-53, in (0, 1].
///  - normal:   Box-Muller on two uniforms u1, u2:
///              sqrt(-2 ln u1) * cos(2 pi u2), then sqrt(-2 ln u1) * sin(2 pi u2)
///              for the following call.
class SeededRng {
public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed) {
    key_[0] = static_cast<std::uint32_t>(seed);
    key_[1] = static_cast<std::uint32_t>(seed >> 32);
  }

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint32_t next_u32() {
    if (word_ == 16) refill();
    return block_[word_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return (hi << 32) | lo;
  }

  double uniform() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  // Uniform integer in [0, n), by rejection to avoid modulo bias.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw InvalidArgument("SeededRng::below: n must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = next_u64();
    while (v >= limit) v = next_u64();
    return v % n;
  }

  double normal() {
    if (spare_) {
      const double v = *spare_;
      spare_.reset();
      return v;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    return r * std::cos(theta);
  }

private:
  void refill() {
    const std::array<std::uint32_t, 3> nonce{
        static_cast<std::uint32_t>(block_index_ >> 32), 0u, 0u};
    block_ = chacha20_block(key_, static_cast<std::uint32_t>(block_index_), nonce);
    ++block_index_;
    word_ = 0;
  }

  std::uint64_t seed_;
  std::array<std::uint32_t, 8> key_{};
  std::array<std::uint32_t, 16> block_{};
  std::uint64_t block_index_ = 0;
  int word_ = 16;
  std::optional<double> spare_;
};

/// Real matrix of i.i.d. N(0, 1) entries, filled row-major.
inline RealMatrix gaussian_matrix(SeededRng& rng, Eigen::Index rows, Eigen::Index cols) {
  if (rows < 1 || cols < 1) throw InvalidArgument("gaussian_matrix: empty shape");
  RealMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

/// Complex matrix of i.i.d. CN(0, 1) entries (real and imaginary parts each
/// N(0, 1/2), real part drawn first), filled row-major.
inline ComplexMatrix complex_gaussian_matrix(SeededRng& rng, Eigen::Index rows,
                                             Eigen::Index cols) {
  if (rows < 1 || cols < 1) throw InvalidArgument("complex_gaussian_matrix: empty shape");
  ComplexMatrix m(rows, cols);
  const double s = std::sqrt(0.5);
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const double re = rng.normal();
    const double im = rng.normal();
    m.data()[i] = Complex(s * re, s * im);
  }
  return m;
}

}  // namespace csippp
