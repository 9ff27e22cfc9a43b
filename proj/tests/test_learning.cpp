#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "fjs/learning.hpp"

namespace {

using Big = boost::multiprecision::cpp_bin_float_50;

// floor(100 p / r^alpha + 1/2) with 50 decimal digits; alpha given as a
// rational num/den so the exponent itself is exact.
fjs::Time psi_oracle(int p, int r, int alpha_num, int alpha_den) {
  const Big alpha = Big(alpha_num) / Big(alpha_den);
  const Big x = Big(100 * p) / boost::multiprecision::pow(Big(r), alpha) + Big(1) / 2;
  return boost::multiprecision::floor(x).convert_to<fjs::Time>();
}

TEST(Learning, FigureTwoWeights) {
  const fjs::LearningFn psi(1.0);
  EXPECT_EQ(psi(1, 1), 100);
  EXPECT_EQ(psi(10, 2), 500);
  EXPECT_EQ(psi(1, 3), 33);
  EXPECT_EQ(psi(1, 4), 25);
  EXPECT_EQ(psi(1, 2), 50);
  EXPECT_EQ(psi(10, 3), 333);
  EXPECT_EQ(psi(1, 5), 20);
}

TEST(Learning, FractionalRateGolden) {
  // 700 / 5^0.1 = 595.937..., frozen from the high-precision oracle.
  EXPECT_EQ(psi_oracle(7, 5, 1, 10), 596);
  EXPECT_EQ(fjs::LearningFn(0.1)(7, 5), 596);
}

TEST(Learning, FirstPositionIsExact) {
  for (double alpha : {0.1, 0.2, 0.3, 1.0, 2.5})
    for (fjs::Time p = 0; p <= 1000; ++p) EXPECT_EQ(fjs::LearningFn::actual_time(p, 1, alpha), 100 * p);
}

TEST(Learning, ZeroTimeStaysZero) {
  for (int r = 1; r <= 60; ++r) EXPECT_EQ(fjs::LearningFn(0.3)(0, r), 0);
}

TEST(Learning, MonotoneInPosition) {
  for (double alpha : {0.1, 0.2, 0.3, 1.0})
    for (fjs::Time p = 0; p <= 100; ++p)
      for (int r = 1; r < 80; ++r) EXPECT_GE(fjs::LearningFn::actual_time(p, r, alpha), fjs::LearningFn::actual_time(p, r + 1, alpha));
}

TEST(Learning, MatchesHighPrecisionOracleOnGrid) {
  const std::pair<int, int> rates[] = {{1, 10}, {2, 10}, {3, 10}, {1, 1}};
  int mismatches = 0;
  for (auto [num, den] : rates) {
    const fjs::LearningFn psi(static_cast<double>(num) / den);
    for (int p = 1; p <= 100; ++p)
      for (int r = 1; r <= 50; ++r)
        if (psi(p, r) != psi_oracle(p, r, num, den)) {
          ++mismatches;
          ADD_FAILURE() << "alpha=" << num << "/" << den << " p=" << p << " r=" << r;
        }
  }
  EXPECT_EQ(mismatches, 0);
}

TEST(Learning, RejectsBadRate) {
  EXPECT_THROW(fjs::LearningFn(0.0), fjs::Error);
  EXPECT_THROW(fjs::LearningFn(-0.2), fjs::Error);
  EXPECT_THROW(fjs::LearningFn(std::numeric_limits<double>::quiet_NaN()), fjs::Error);
}

}  // namespace
