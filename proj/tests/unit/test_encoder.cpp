#include <gtest/gtest.h>

#include "csippp/encoder/encoder.hpp"
#include "test_support.hpp"

using namespace csippp;

namespace {

double ortho_error(const RealMatrix& a) {
  return (a * a.transpose() - Eigen::MatrixXd::Identity(a.rows(), a.rows())).cwiseAbs().maxCoeff();
}

}  // namespace

TEST(Projection, SquareIsOrthogonal) {
  for (auto method : {OrthoMethod::qr, OrthoMethod::svd}) {
    const auto code = generate_projection(3, 32, 32, method);
    const RealMatrix& a = code.matrix();
    const Eigen::MatrixXd ata = a.transpose() * a;
    EXPECT_LT((ata - Eigen::MatrixXd::Identity(32, 32)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Projection, RegenerationIsBitIdentical) {
  for (auto method : {OrthoMethod::qr, OrthoMethod::svd}) {
    const auto a = generate_projection(7, 64, 128, method);
    const auto b = generate_projection(7, 64, 128, method);
    EXPECT_EQ(a.matrix(), b.matrix());
    EXPECT_LT(ortho_error(a.matrix()), 1e-10);
  }
}

TEST(Projection, SeedsGiveDifferentMatrices) {
  const auto a = generate_projection(1, 8, 16, OrthoMethod::qr);
  const auto b = generate_projection(2, 8, 16, OrthoMethod::qr);
  EXPECT_NE(a.matrix(), b.matrix());
}

TEST(Projection, RowsForCompressionRatio) {
  const Eigen::Index n = 2 * 32 * 32;
  EXPECT_EQ(n, 2048);
  EXPECT_EQ(rows_for_ratio(1.0 / 4, n), 512);
  EXPECT_EQ(rows_for_ratio(1.0 / 2, n), 1024);
  EXPECT_EQ(rows_for_ratio(1.0 / 64, n), 32);
  EXPECT_THROW(rows_for_ratio(0.0, n), InvalidArgument);
  EXPECT_THROW(rows_for_ratio(1.5, n), InvalidArgument);
}

TEST(Projection, RejectsMGreaterThanN) {
  EXPECT_THROW(generate_projection(1, 9, 8, OrthoMethod::qr), InvalidArgument);
}

TEST(Projection, SerializesToEighteenBytes) {
  const ProjectionCode code(0x0102030405060708ull, 512, 2048, OrthoMethod::svd);
  const auto bytes = code.serialize();
  ASSERT_EQ(bytes.size(), 18u);
  const std::array<std::uint8_t, 18> expected{1, 8, 7, 6, 5, 4, 3, 2, 1, 0, 2, 0, 0, 0, 8, 0, 0, 0};
  EXPECT_EQ(bytes, expected);
  const auto back = ProjectionCode::deserialize(bytes);
  EXPECT_EQ(back.seed(), code.seed());
  EXPECT_EQ(back.rows(), 512);
  EXPECT_EQ(back.cols(), 2048);
  EXPECT_EQ(back.method(), OrthoMethod::svd);
}

TEST(Projection, DeserializeRejectsBadTags) {
  auto bytes = ProjectionCode(1, 2, 4, OrthoMethod::qr).serialize();
  auto bad_version = bytes;
  bad_version[0] = 9;
  EXPECT_THROW(ProjectionCode::deserialize(bad_version), FormatError);
  bytes[17] = 7;
  EXPECT_THROW(ProjectionCode::deserialize(bytes), FormatError);
}

TEST(Projection, RoundTripReproducesMatrix) {
  const auto code = generate_projection(99, 6, 20, OrthoMethod::qr);
  EXPECT_EQ(ProjectionCode::deserialize(code.serialize()).matrix(), code.matrix());
}

TEST(Compress, ZeroInputGivesZero) {
  const auto code = generate_projection(1, 4, 8, OrthoMethod::qr);
  EXPECT_EQ(compress(code, RealVector::Zero(8)).values, RealVector::Zero(4));
}

TEST(Compress, SquareIsIsometry) {
  SeededRng rng(31);
  const auto code = generate_projection(2, 16, 16, OrthoMethod::qr);
  const RealVector h = test::random_vector(rng, 16);
  EXPECT_NEAR(compress(code, h).values.norm(), h.norm(), 1e-10);
}

TEST(Compress, BasisVectorPicksColumn) {
  const auto code = generate_projection(3, 4, 8, OrthoMethod::qr);
  RealVector e3 = RealVector::Zero(8);
  e3(3) = 1.0;
  const RealVector y = compress(code, e3).values;
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_EQ(y(i), code.matrix()(i, 3));
}

TEST(Compress, LinearAndContractive) {
  SeededRng rng(32);
  const auto code = generate_projection(4, 20, 50, OrthoMethod::qr);
  for (int trial = 0; trial < 20; ++trial) {
    const RealVector h1 = test::random_vector(rng, 50), h2 = test::random_vector(rng, 50);
    const double a = rng.normal(), b = rng.normal();
    const RealVector lhs = compress(code, RealVector(a * h1 + b * h2)).values;
    const RealVector rhs = a * compress(code, h1).values + b * compress(code, h2).values;
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE(compress(code, h1).values.norm(), h1.norm() + 1e-10);
  }
}

TEST(Compress, DimensionMismatch) {
  const auto code = generate_projection(5, 4, 8, OrthoMethod::qr);
  EXPECT_THROW(compress(code, RealVector::Zero(7)), InvalidArgument);
}

TEST(Quantizer, ZeroMapsToFirstLevelAboveZero) {
  const QuantizerConfig q{200.0, 3, 1.0};
  EXPECT_EQ(quantize_one(0.0, q), 4u);
  const double back = dequantize_one(4, q);
  EXPECT_GT(back, 0.0);
  // Half a companded step, mapped back through the expander.
  EXPECT_NEAR(back, std::expm1(0.125 * std::log1p(200.0)) / 200.0, 1e-15);
}

TEST(Quantizer, SaturatesAtClip) {
  for (int b = 2; b <= 16; ++b) {
    const QuantizerConfig q{200.0, b, 2.5};
    EXPECT_EQ(quantize_one(2.5, q), (1u << b) - 1);
    EXPECT_EQ(quantize_one(1e9, q), (1u << b) - 1);
    EXPECT_EQ(quantize_one(-1e9, q), 0u);
  }
}

TEST(Quantizer, CompandedErrorWithinOneStepExhaustive) {
  // Sweep a dense grid that hits every quantizer cell many times.
  for (int b = 3; b <= 6; ++b) {
    const QuantizerConfig q{200.0, b, 1.0};
    const double bound = std::ldexp(1.0, -b);
    double worst = 0.0;
    for (int k = -200000; k <= 200000; ++k) {
      const double x = k / 200000.0;
      const double xh = dequantize_one(quantize_one(x, q), q);
      worst = std::max(worst, std::abs(mu_law_compress(x, q) - mu_law_compress(xh, q)));
    }
    EXPECT_LE(worst, bound + 1e-12) << "B=" << b;
  }
}

TEST(Quantizer, RandomFeedbackErrorBound) {
  SeededRng rng(33);
  const QuantizerConfig q{200.0, 6, 4.0};
  const RealVector y = test::random_vector(rng, 1000);
  const RealVector yh = dequantize(quantize(y, q), q);
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (std::abs(y(i)) > q.clip) continue;
    EXPECT_LE(std::abs(mu_law_compress(y(i), q) - mu_law_compress(yh(i), q)), 1.0 / 64 + 1e-12);
  }
}

TEST(Quantizer, CodesAreFixedPoints) {
  for (int b = 3; b <= 6; ++b) {
    const QuantizerConfig q{200.0, b, 3.0};
    for (std::uint32_t c = 0; c < q.levels(); ++c) EXPECT_EQ(quantize_one(dequantize_one(c, q), q), c);
  }
}

TEST(Quantizer, DequantizeStrictlyIncreasing) {
  const QuantizerConfig q{200.0, 6, 1.0};
  for (std::uint32_t c = 1; c < q.levels(); ++c) EXPECT_LT(dequantize_one(c - 1, q), dequantize_one(c, q));
}

TEST(Quantizer, MonotoneInInput) {
  SeededRng rng(34);
  const QuantizerConfig q{200.0, 4, 1.0};
  for (int trial = 0; trial < 5000; ++trial) {
    double a = 1.5 * (2.0 * rng.uniform() - 1.0), b = 1.5 * (2.0 * rng.uniform() - 1.0);
    if (a > b) std::swap(a, b);
    EXPECT_LE(quantize_one(a, q), quantize_one(b, q));
  }
}

TEST(Quantizer, SixteenBitsNearlyLossless) {
  const QuantizerConfig q{200.0, 16, 2.0};
  double worst = 0.0;
  for (int k = -20000; k <= 20000; ++k) {
    const double x = 2.0 * k / 20000.0;
    worst = std::max(worst, std::abs(x - dequantize_one(quantize_one(x, q), q)));
  }
  EXPECT_LT(worst, 1e-3 * q.clip);
}

TEST(Quantizer, ErrorShrinksWithBits) {
  double previous = 1e9;
  for (int b = 3; b <= 12; ++b) {
    const QuantizerConfig q{200.0, b, 1.0};
    double worst = 0.0;
    for (int k = -5000; k <= 5000; ++k) {
      const double x = k / 5000.0;
      worst = std::max(worst, std::abs(x - dequantize_one(quantize_one(x, q), q)));
    }
    EXPECT_LT(worst, previous);
    previous = worst;
  }
}

TEST(Quantizer, ConfigValidation) {
  EXPECT_THROW(quantize(RealVector::Zero(2), QuantizerConfig{0.0, 3, 1.0}), InvalidArgument);
  EXPECT_THROW(quantize(RealVector::Zero(2), QuantizerConfig{200.0, 1, 1.0}), InvalidArgument);
  EXPECT_THROW(quantize(RealVector::Zero(2), QuantizerConfig{200.0, 17, 1.0}), InvalidArgument);
  EXPECT_THROW(quantize(RealVector::Zero(2), QuantizerConfig{200.0, 3, 0.0}), InvalidArgument);
  EXPECT_THROW(dequantize({8}, QuantizerConfig{200.0, 3, 1.0}), InvalidArgument);
}

TEST(Feedback, QuantizedPipelineIsDeterministic) {
  SeededRng rng(35);
  const RealVector h = test::random_vector(rng, 64);
  const QuantizerConfig q{200.0, 4, 3.0};
  const auto run = [&] { return quantize_feedback(compress(generate_projection(8, 16, 64, OrthoMethod::qr), h), q); };
  const auto a = run(), b = run();
  EXPECT_EQ(a.values, b.values);
  EXPECT_EQ(*a.codes, *b.codes);
  for (auto c : *a.codes) EXPECT_LT(c, 16u);
}
