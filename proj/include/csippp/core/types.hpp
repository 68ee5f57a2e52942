#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "csippp/core/error.hpp"

namespace csippp {

using Complex = std::complex<double>;

// Row-major so that the flat entry order matches the on-disk and vector layouts.
using ComplexMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RealMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const auto v = m.derived().data()[i];
    if constexpr (std::is_same_v<typename Derived::Scalar, Complex>) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    } else {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

// Dense 3-D real tensor, last dimension fastest: index (i, j, c) lives at
// (i * d1 + j) * d2 + c.
class RealTensor3 {
public:
  RealTensor3() = default;
  RealTensor3(std::size_t d0, std::size_t d1, std::size_t d2, double fill = 0.0)
      : d0_(d0), d1_(d1), d2_(d2), data_(d0 * d1 * d2, fill) {}

  std::size_t d0() const noexcept { return d0_; }
  std::size_t d1() const noexcept { return d1_; }
  std::size_t d2() const noexcept { return d2_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j, std::size_t c) {
    return data_[(i * d1_ + j) * d2_ + c];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t c) const {
    return data_[(i * d1_ + j) * d2_ + c];
  }

  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

  bool operator==(const RealTensor3&) const = default;

private:
  std::size_t d0_ = 0;
  std::size_t d1_ = 0;
  std::size_t d2_ = 0;
  std::vector<double> data_;
};

}  // namespace csippp
