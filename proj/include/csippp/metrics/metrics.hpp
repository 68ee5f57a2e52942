#pragma once

#include <limits>
#include <map>

#include "csippp/core/types.hpp"

namespace csippp {

/// ||estimate - truth||^2 / ||truth||^2 (linear). Works for real vectors and
/// complex matrices alike.
template <typename A, typename B>
double nmse(const Eigen::MatrixBase<A>& estimate, const Eigen::MatrixBase<B>& truth) {
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols())
    throw InvalidShape("nmse: dimension mismatch");
  const double denom = truth.squaredNorm();
  if (denom == 0.0) throw DegenerateSample("nmse: zero reference");
  return (estimate - truth).squaredNorm() / denom;
}

/// 10 log10(x); exact zero maps to -infinity.
inline double to_db(double linear) {
  if (linear == 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(linear);
}

/// Mean over subcarrier rows of |h_hat_i^H h_i| / (||h_hat_i|| ||h_i||).
/// Rows of the estimate that are all zero contribute 0.
inline double cosine_similarity(const ComplexMatrix& estimate_sf, const ComplexMatrix& truth_sf) {
  if (estimate_sf.rows() != truth_sf.rows() || estimate_sf.cols() != truth_sf.cols())
    throw InvalidShape("cosine_similarity: dimension mismatch");
  if (truth_sf.rows() == 0) throw InvalidShape("cosine_similarity: no subcarriers");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < truth_sf.rows(); ++i) {
    const double nt = truth_sf.row(i).norm();
    if (nt == 0.0) throw DegenerateSample("cosine_similarity: zero true channel on subcarrier " + std::to_string(i));
    const double ne = estimate_sf.row(i).norm();
    if (ne == 0.0) continue;
    const Complex inner = estimate_sf.row(i).dot(truth_sf.row(i));
    sum += std::min(1.0, std::abs(inner) / (ne * nt));
  }
  return sum / static_cast<double>(truth_sf.rows());
}

/// Matched-filter precoder w = h^H / ||h||, returned as the conjugated
/// entries (a row vector).
inline ComplexVector mf_precoder(const ComplexVector& h) {
  const double n = h.norm();
  if (n == 0.0) throw DegenerateSample("mf_precoder: zero channel vector");
  return h.conjugate() / n;
}

/// Mean over subcarriers of log2(1 + SNR |w_i h_i|^2), with w_i built from
/// the estimate and h_i the true channel. Zero estimate rows give zero gain.
inline double achievable_rate(const ComplexMatrix& estimate_sf, const ComplexMatrix& truth_sf,
                              double snr_db) {
  if (estimate_sf.rows() != truth_sf.rows() || estimate_sf.cols() != truth_sf.cols())
    throw InvalidShape("achievable_rate: dimension mismatch");
  const double snr = std::pow(10.0, snr_db / 10.0);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < truth_sf.rows(); ++i) {
    const ComplexVector est = estimate_sf.row(i).transpose();
    if (est.norm() == 0.0) continue;
    const ComplexVector w = mf_precoder(est);
    // w is stored as the row vector's entries: w * h = sum_k w_k h_k.
    const Complex gain = (w.array() * truth_sf.row(i).transpose().array()).sum();
    sum += std::log2(1.0 + snr * std::norm(gain));
  }
  return sum / static_cast<double>(truth_sf.rows());
}

inline const std::vector<double>& default_rate_snrs_db() {
  static const std::vector<double> snrs{0.0, 10.0, 20.0};
  return snrs;
}

struct MetricsReport {
  double nmse_db = 0.0;
  double cos = 0.0;
  std::map<double, double> rate_bps_hz;
  std::size_t sample_count = 0;
};

/// Order-independent accumulator for per-sample metrics; the dataset mean
/// is taken before the dB conversion.
class MetricsAccumulator {
public:
  void add(double nmse_linear, double cos, const std::map<double, double>& rates) {
    nmse_sum_ += nmse_linear;
    cos_sum_ += cos;
    for (const auto& [snr, r] : rates) rate_sum_[snr] += r;
    ++count_;
  }

  MetricsReport report() const {
    MetricsReport r;
    r.sample_count = count_;
    if (count_ == 0) return r;
    const double n = static_cast<double>(count_);
    r.nmse_db = to_db(nmse_sum_ / n);
    r.cos = cos_sum_ / n;
    for (const auto& [snr, s] : rate_sum_) r.rate_bps_hz[snr] = s / n;
    return r;
  }

private:
  double nmse_sum_ = 0.0;
  double cos_sum_ = 0.0;
  std::map<double, double> rate_sum_;
  std::size_t count_ = 0;
};

}  // namespace csippp
