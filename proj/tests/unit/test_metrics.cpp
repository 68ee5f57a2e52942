#include <gtest/gtest.h>

#include "csippp/csi/transform.hpp"
#include "csippp/metrics/metrics.hpp"
#include "test_support.hpp"

using namespace csippp;

namespace {

ComplexMatrix unit_rows(SeededRng& rng, Eigen::Index ns, Eigen::Index nt) {
  ComplexMatrix h = complex_gaussian_matrix(rng, ns, nt);
  for (Eigen::Index i = 0; i < ns; ++i) h.row(i).normalize();
  return h;
}

ComplexVector random_unit(SeededRng& rng, Eigen::Index n) {
  ComplexVector v = complex_gaussian_matrix(rng, n, 1).col(0);
  return v.normalized();
}

}  // namespace

TEST(Nmse, PerfectEstimateIsMinusInfinity) {
  SeededRng rng(81);
  const ComplexMatrix h = complex_gaussian_matrix(rng, 4, 4);
  EXPECT_EQ(nmse(h, h), 0.0);
  EXPECT_EQ(to_db(nmse(h, h)), -std::numeric_limits<double>::infinity());
}

TEST(Nmse, ZeroAndDoubledEstimatesAreZeroDb) {
  SeededRng rng(82);
  const ComplexMatrix h = complex_gaussian_matrix(rng, 4, 4);
  EXPECT_DOUBLE_EQ(nmse(ComplexMatrix::Zero(4, 4).eval(), h), 1.0);
  EXPECT_DOUBLE_EQ(nmse((2.0 * h).eval(), h), 1.0);
  EXPECT_NEAR(to_db(1.0), 0.0, 1e-15);
}

TEST(Nmse, ZeroReferenceIsDegenerate) {
  EXPECT_THROW(nmse(ComplexMatrix::Ones(2, 2).eval(), ComplexMatrix::Zero(2, 2).eval()), DegenerateSample);
}

TEST(Nmse, InvariantUnderDomainTransform) {
  SeededRng rng(83);
  const ComplexMatrix x = complex_gaussian_matrix(rng, 32, 8);
  const ComplexMatrix xh = x + 0.1 * complex_gaussian_matrix(rng, 32, 8);
  EXPECT_NEAR(nmse(to_angular_delay(xh), to_angular_delay(x)), nmse(xh, x), 1e-10);
}

TEST(Cosine, ScaleInvariant) {
  SeededRng rng(84);
  const ComplexMatrix h = complex_gaussian_matrix(rng, 8, 4);
  for (Complex c : {Complex(2.0, 0.0), Complex(-0.3, 1.7), Complex(0.0, -5.0)})
    EXPECT_NEAR(cosine_similarity((c * h).eval(), h), 1.0, 1e-12);
  // Per-subcarrier scaling as well.
  ComplexMatrix scaled = h;
  for (Eigen::Index i = 0; i < 8; ++i) scaled.row(i) *= Complex(1.0 + i, -0.5 * i);
  EXPECT_NEAR(cosine_similarity(scaled, h), 1.0, 1e-12);
}

TEST(Cosine, OrthogonalRowsGiveZero) {
  ComplexMatrix h(2, 2), e(2, 2);
  h << 1, 0, 0, 1;
  e << 0, 1, Complex(0, 3), 0;
  EXPECT_EQ(cosine_similarity(e, h), 0.0);
}

TEST(Cosine, TwoSubcarrierToy) {
  ComplexMatrix h(2, 2), e(2, 2);
  h << Complex(1, 1), 2, 0, Complex(0, 1);
  e << Complex(1, 1), 2, 1, 0;
  EXPECT_NEAR(cosine_similarity(e, h), 0.5, 1e-15);
}

TEST(Cosine, ZeroEstimateRowContributesZero) {
  ComplexMatrix h = ComplexMatrix::Ones(2, 3), e = ComplexMatrix::Ones(2, 3);
  e.row(1).setZero();
  EXPECT_NEAR(cosine_similarity(e, h), 0.5, 1e-15);
}

TEST(Cosine, ZeroTrueRowIsDegenerate) {
  ComplexMatrix h = ComplexMatrix::Ones(2, 3);
  h.row(0).setZero();
  EXPECT_THROW(cosine_similarity(ComplexMatrix::Ones(2, 3).eval(), h), DegenerateSample);
}

TEST(Cosine, AlwaysInUnitInterval) {
  SeededRng rng(85);
  for (int trial = 0; trial < 100; ++trial) {
    const double c = cosine_similarity(complex_gaussian_matrix(rng, 6, 4), complex_gaussian_matrix(rng, 6, 4));
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0);
  }
}

TEST(MfPrecoder, BasisVector) {
  ComplexVector e = ComplexVector::Zero(4);
  e(0) = 1.0;
  EXPECT_EQ(mf_precoder(e), e);
}

TEST(MfPrecoder, UnitNormAndRealGain) {
  SeededRng rng(86);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexVector h = complex_gaussian_matrix(rng, 8, 1).col(0);
    const ComplexVector w = mf_precoder(h);
    EXPECT_NEAR(w.norm(), 1.0, 1e-12);
    const Complex gain = (w.array() * h.array()).sum();
    EXPECT_NEAR(gain.real(), h.norm(), 1e-12);
    EXPECT_NEAR(gain.imag(), 0.0, 1e-12);
  }
}

TEST(MfPrecoder, ZeroIsDegenerate) {
  EXPECT_THROW(mf_precoder(ComplexVector::Zero(3)), DegenerateSample);
}

TEST(Rate, PerfectUnitNormAtTenDb) {
  SeededRng rng(87);
  const ComplexMatrix h = unit_rows(rng, 16, 8);
  EXPECT_NEAR(achievable_rate(h, h, 10.0), std::log2(11.0), 1e-9);
  EXPECT_NEAR(std::log2(11.0), 3.4594, 1e-4);
}

TEST(Rate, OrthogonalPrecoderGivesZero) {
  ComplexMatrix h(1, 2), e(1, 2);
  h << 1, 0;
  e << 0, 1;
  EXPECT_EQ(achievable_rate(e, h, 20.0), 0.0);
}

TEST(Rate, PerfectCsiDominatesCorruptedCsi) {
  SeededRng rng(88);
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix h = complex_gaussian_matrix(rng, 8, 16);
    const ComplexMatrix corrupted = h + (0.1 + rng.uniform()) * complex_gaussian_matrix(rng, 8, 16);
    for (double snr : default_rate_snrs_db()) EXPECT_GE(achievable_rate(h, h, snr), achievable_rate(corrupted, h, snr));
  }
}

TEST(Rate, MatchedFilterBeatsRandomUnitPrecoders) {
  SeededRng rng(89);
  const ComplexVector h = complex_gaussian_matrix(rng, 8, 1).col(0);
  const double best = std::norm((mf_precoder(h).array() * h.array()).sum());
  for (int trial = 0; trial < 1000; ++trial) {
    const ComplexVector w = random_unit(rng, 8);
    EXPECT_LE(std::norm((w.array() * h.array()).sum()), best + 1e-12);
  }
}

TEST(Accumulator, MeanBeforeDb) {
  MetricsAccumulator acc;
  acc.add(0.1, 0.9, {{10.0, 2.0}});
  acc.add(0.001, 0.7, {{10.0, 4.0}});
  const auto r = acc.report();
  EXPECT_EQ(r.sample_count, 2u);
  EXPECT_NEAR(r.nmse_db, 10.0 * std::log10(0.0505), 1e-12);
  EXPECT_NEAR(r.cos, 0.8, 1e-15);
  EXPECT_NEAR(r.rate_bps_hz.at(10.0), 3.0, 1e-15);
}
