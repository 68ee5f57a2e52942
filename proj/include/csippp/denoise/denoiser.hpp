#pragma once

#include <functional>
#include <memory>
#include <string>

#include "csippp/csi/transform.hpp"
#include "csippp/denoise/cnn.hpp"
#include "csippp/denoise/soft_threshold.hpp"

namespace csippp {

/// A plug-in denoiser for the h-update: maps the vectorized iterate z and
/// the noise level sigma to a denoised vector of the same length.
/// Instances are immutable and can be shared across threads.
class Denoiser {
public:
  using Fn = std::function<RealVector(const RealVector&, double)>;

  Denoiser(std::string kind, std::string description, Fn fn)
      : kind_(std::move(kind)), description_(std::move(description)), fn_(std::move(fn)) {}

  RealVector operator()(const RealVector& z, double sigma) const {
    RealVector out = fn_(z, sigma);
    if (out.size() != z.size()) throw InvalidShape("denoiser '" + kind_ + "' changed vector length");
    return out;
  }

  const std::string& kind() const noexcept { return kind_; }
  const std::string& description() const noexcept { return description_; }

private:
  std::string kind_;
  std::string description_;
  Fn fn_;
};

inline Denoiser make_identity_denoiser() {
  return Denoiser("identity", "identity", [](const RealVector& z, double) { return z; });
}

inline Denoiser make_soft_threshold_denoiser(double gain) {
  if (!(gain > 0.0)) throw InvalidArgument("soft-threshold gain must be > 0");
  return Denoiser("soft", "soft-threshold gain=" + std::to_string(gain),
                  [gain](const RealVector& z, double sigma) {
                    return denoise_soft_threshold(z, sigma, gain);
                  });
}

/// CNN denoiser on Nd x Nt channels; the vector is reshaped to the
/// (real, imag) tensor and back.
inline Denoiser make_cnn_denoiser(std::shared_ptr<const DenoiserModel> model, Eigen::Index nd,
                                  Eigen::Index nt, std::string source = "in-memory") {
  validate(*model);
  if (nd % 2 != 0 || nt % 2 != 0) throw InvalidShape("cnn denoiser: Nd and Nt must be even");
  return Denoiser("cnn", "cnn " + source + " params=" + std::to_string(model->parameter_count()),
                  [model, nd, nt](const RealVector& z, double sigma) {
                    return tensor_to_vector(denoise_cnn(*model, vector_to_tensor(z, nd, nt), sigma));
                  });
}

}  // namespace csippp
