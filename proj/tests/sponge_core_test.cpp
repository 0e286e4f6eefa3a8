#include <gtest/gtest.h>

#include <cmath>

#include "sponge/sponge.hpp"
#include "support.hpp"

using namespace sponge;
using namespace sponge::testing;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Config;
}

}  // namespace

TEST(Validate, AcceptsCarpetAndCanonicalizes) {
  const SpongeSpec spec = validate_sponge({{3, 2}, {{2, 0}, {0, 0}, {1, 1}}});
  EXPECT_EQ(spec.dim(), 2u);
  ASSERT_EQ(spec.digit_count(), 3u);
  EXPECT_EQ(spec.digits()[0], Digit({0, 0}));
  EXPECT_EQ(spec.digits()[1], Digit({1, 1}));
  EXPECT_EQ(spec.digits()[2], Digit({2, 0}));
  EXPECT_EQ(spec.index_of(Digit{{1, 1}}), 1);
  EXPECT_EQ(spec.index_of(Digit{{1, 0}}), -1);
}

TEST(Validate, RejectsBadInput) {
  EXPECT_EQ(code_of([] { validate_sponge({{2, 3}, {{0, 0}}}); }), ErrorCode::BasesNotDecreasing);
  EXPECT_EQ(code_of([] { validate_sponge({{3, 3}, {{0, 0}}}); }), ErrorCode::BasesNotDecreasing);
  EXPECT_EQ(code_of([] { validate_sponge({{3, 1}, {{0, 0}}}); }), ErrorCode::BasesNotDecreasing);
  EXPECT_EQ(code_of([] { validate_sponge({{3, 2}, {{3, 0}}}); }), ErrorCode::DigitOutOfRange);
  EXPECT_EQ(code_of([] { validate_sponge({{3, 2}, {{0, -1}}}); }), ErrorCode::DigitOutOfRange);
  EXPECT_EQ(code_of([] { validate_sponge({{3, 2}, {{0}}}); }), ErrorCode::DigitLengthMismatch);
  EXPECT_EQ(code_of([] { validate_sponge({{3, 2}, {}}); }), ErrorCode::EmptyDigitSet);
  EXPECT_EQ(code_of([] { validate_sponge({{3, 2}, {{1, 1}, {1, 1}}}); }), ErrorCode::DuplicateDigit);
}

TEST(Projection, KeepsTrailingCoordinates) {
  const SpongeSpec ex1 = carpet_321();
  EXPECT_EQ(project_digit(ex1, Digit{{1, 1}}, 2), Digit({1}));
  EXPECT_EQ(project_digit(ex1, Digit{{1, 1}}, 1), Digit({1, 1}));
  EXPECT_EQ(project_digit(carpet_43(), Digit{{3, 0}}, 2), Digit({0}));
  const SpongeSpec s3 = validate_sponge({{5, 3, 2}, {{4, 2, 1}}});
  EXPECT_EQ(project_digit(s3, Digit{{4, 2, 1}}, 2), Digit({2, 1}));
  EXPECT_EQ(project_digit(s3, Digit{{4, 2, 1}}, 3), Digit({1}));
  EXPECT_THROW(project_digit(ex1, Digit{{1, 1}}, 3), Error);
}

TEST(Projection, Alphabets) {
  const SpongeSpec ex1 = carpet_321();
  const SpongeSpec ex3 = carpet_43();
  const auto& a = projected_alphabet(ex1, 2);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[0], Digit({0}));
  EXPECT_EQ(a[1], Digit({1}));
  const auto& b = projected_alphabet(ex3, 2);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[1], Digit({2}));
  EXPECT_EQ(projected_alphabet(carpet_321(), 1).size(), 3u);
}

TEST(Weights, CarpetValues) {
  const Weights w = dimension_weights(carpet_321());
  EXPECT_NEAR(w.lambda[0], kLog2 / kLog3, 1e-15);
  EXPECT_EQ(w.lambda[1], 1.0);
  EXPECT_NEAR(w.w[0], 1 / kLog3, 1e-15);
  EXPECT_NEAR(w.w[1], 1 / kLog2 - 1 / kLog3, 1e-15);
}

TEST(ApproximateSquares, SmallLevels) {
  const SpongeSpec spec = carpet_321();
  EXPECT_EQ(approximate_square_count(spec, 1), 3);
  EXPECT_EQ(approximate_square_count(spec, 2), 9);
  const auto e = approximate_square_exponents(spec, 10);
  EXPECT_EQ(e[0], 7);  // ceil(6.309...)
  EXPECT_EQ(e[1], 3);
  EXPECT_THROW(approximate_square_exponents(spec, 0), Error);
}

TEST(ApproximateSquares, ExactCeilingForPowerBases) {
  // 4 = 2^2: lambda_1 = 1/2 exactly, so ceil(n/2) must be exact for odd n.
  const SpongeSpec spec = validate_sponge({{4, 2}, {{0, 0}, {3, 1}, {1, 0}}});
  EXPECT_EQ(level_depth(spec, 1, 7), 4);
  EXPECT_EQ(level_depth(spec, 1, 8), 4);
  const SpongeSpec s98 = validate_sponge({{9, 8}, {{0, 0}}});
  EXPECT_EQ(level_depth(s98, 1, 9), 9);  // ceil(9 * log 8/log 9) = ceil(8.52)
  const SpongeSpec s84 = validate_sponge({{8, 4}, {{0, 0}}});
  EXPECT_EQ(level_depth(s84, 1, 3), 2);  // lambda = 2/3 exactly
  EXPECT_EQ(level_depth(s84, 1, 6), 4);
}

TEST(BoxDimension, SingleDigitIsZero) {
  const SpongeSpec spec = validate_sponge({{3, 2}, {{1, 0}}});
  for (std::int64_t n : {1, 10, 1000}) {
    EXPECT_EQ(approximate_square_count(spec, n), 1);
    EXPECT_EQ(box_dim_estimate(spec, n), 0.0);
  }
}

TEST(BoxDimension, FullProductIsExactlyD) {
  std::vector<std::vector<int>> digits;
  for (int x = 0; x < 4; ++x) {
    for (int y = 0; y < 2; ++y) digits.push_back({x, y});
  }
  const SpongeSpec spec = validate_sponge({{4, 2}, digits});
  EXPECT_NEAR(box_dim_estimate(spec, 10), 2.0, 1e-14);
  EXPECT_EQ(approximate_square_count(spec, 10), BigInt(1) << 20);
}

TEST(BoxDimension, WithinCeilingErrorBound) {
  const SpongeSpec spec = carpet_321();
  const double packing = 2 - kLog2 / kLog3;
  for (std::int64_t n : {100, 1000, 10000, 100000}) {
    const double bound = 2 * std::log(3.0) / (static_cast<double>(n) * kLog2);
    EXPECT_LE(std::abs(box_dim_estimate(spec, n) - packing), bound) << n;
  }
}

TEST(BoxDimension, BigCountMatchesLogEstimate) {
  const SpongeSpec spec = carpet_321();
  const BigInt count = approximate_square_count(spec, 300);
  const double log_count = std::log(count.convert_to<double>());
  EXPECT_NEAR(log_count / (300 * kLog2), box_dim_estimate(spec, 300), 1e-12);
}
