#pragma once

#include "csippp/core/types.hpp"

namespace csippp {

// Space-to-channel permutation with factor 2:
//   out(i, j, 4c + 2a + b) = in(2i + a, 2j + b, c),  a, b in {0, 1}.
inline RealTensor3 pixel_unshuffle(const RealTensor3& t) {
  if (t.d0() % 2 != 0 || t.d1() % 2 != 0)
    throw InvalidShape("pixel_unshuffle: spatial dims must be even");
  RealTensor3 out(t.d0() / 2, t.d1() / 2, 4 * t.d2());
  for (std::size_t i = 0; i < out.d0(); ++i)
    for (std::size_t j = 0; j < out.d1(); ++j)
      for (std::size_t c = 0; c < t.d2(); ++c)
        for (std::size_t a = 0; a < 2; ++a)
          for (std::size_t b = 0; b < 2; ++b)
            out(i, j, 4 * c + 2 * a + b) = t(2 * i + a, 2 * j + b, c);
  return out;
}

// Inverse of pixel_unshuffle.
inline RealTensor3 pixel_shuffle(const RealTensor3& t) {
  if (t.d2() % 4 != 0) throw InvalidShape("pixel_shuffle: channel count must be divisible by 4");
  RealTensor3 out(2 * t.d0(), 2 * t.d1(), t.d2() / 4);
  for (std::size_t i = 0; i < t.d0(); ++i)
    for (std::size_t j = 0; j < t.d1(); ++j)
      for (std::size_t c = 0; c < out.d2(); ++c)
        for (std::size_t a = 0; a < 2; ++a)
          for (std::size_t b = 0; b < 2; ++b)
            out(2 * i + a, 2 * j + b, c) = t(i, j, 4 * c + 2 * a + b);
  return out;
}

}  // namespace csippp
