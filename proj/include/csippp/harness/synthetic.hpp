#pragma once

#include <vector>

#include "csippp/core/rng.hpp"
#include "csippp/csi/transform.hpp"

namespace csippp {

struct SyntheticSpec {
  std::size_t count = 0;
  Eigen::Index ns = 256;
  Eigen::Index nt = 32;
  Eigen::Index taps = 64;
  double decay = 0.2;  // per delay row; tap delays ~ floor(Exp(decay)), amplitudes ~ exp(-decay * d)
};

/// Builds each sample in the angular-delay domain and returns the
/// spatial-frequency channels.
///
/// Per tap: delay row d = min(floor(-ln(u) / decay), Ns - 1), angle column
/// uniform over Nt, coefficient CN(0, 1) * exp(-decay * d). Positions are
/// distinct. Each sample is scaled to ||H||_F^2 = Ns (unit mean gain per
/// subcarrier).
inline ComplexMatrix synthetic_angular_delay(SeededRng& rng, const SyntheticSpec& spec) {
  const Eigen::Index cells = spec.ns * spec.nt;
  ComplexMatrix h = ComplexMatrix::Zero(spec.ns, spec.nt);
  std::vector<bool> taken(static_cast<std::size_t>(cells), false);
  for (Eigen::Index k = 0; k < spec.taps; ++k) {
    Eigen::Index row = 0, col = 0;
    for (int attempt = 0;; ++attempt) {
      if (attempt < 64) {
        const double d = std::floor(-std::log(rng.uniform()) / spec.decay);
        row = static_cast<Eigen::Index>(std::min(d, static_cast<double>(spec.ns - 1)));
        col = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(spec.nt)));
      } else {
        // Dense corner: fall back to the first free cell in delay order.
        Eigen::Index free = 0;
        while (taken[static_cast<std::size_t>(free)]) ++free;
        row = free / spec.nt;
        col = free % spec.nt;
      }
      if (!taken[static_cast<std::size_t>(row * spec.nt + col)]) break;
    }
    taken[static_cast<std::size_t>(row * spec.nt + col)] = true;
    const double re = rng.normal();
    const double im = rng.normal();
    h(row, col) = Complex(re, im) * (std::sqrt(0.5) * std::exp(-spec.decay * static_cast<double>(row)));
  }
  const double energy = h.squaredNorm();
  if (energy > 0.0) h *= std::sqrt(static_cast<double>(spec.ns) / energy);
  return h;
}

inline std::vector<ChannelSample> generate_synthetic(SeededRng& rng, const SyntheticSpec& spec) {
  if (spec.ns < 1 || spec.nt < 1) throw InvalidArgument("generate_synthetic: empty shape");
  if (spec.taps < 1 || spec.taps > spec.ns * spec.nt)
    throw InvalidArgument("generate_synthetic: need 1 <= taps <= Ns * Nt");
  if (!(spec.decay > 0.0)) throw InvalidArgument("generate_synthetic: decay must be > 0");
  std::vector<ChannelSample> out;
  out.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i)
    out.push_back({to_spatial_freq(synthetic_angular_delay(rng, spec)), "synthetic"});
  return out;
}

}  // namespace csippp
