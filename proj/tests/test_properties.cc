#include <gtest/gtest.h>

#include "properties.h"

namespace {

constexpr std::uint64_t kSeed = 20240611;

void expect_suite(const props::Suite& s, int min_cases = 100) {
  EXPECT_GE(s.cases, min_cases) << s.summary();
  EXPECT_EQ(s.failures, 0) << s.summary();
}

}  // namespace

TEST(Properties, ComplementSymmetry) { expect_suite(props::complement_symmetry(kSeed)); }
TEST(Properties, Coarea) { expect_suite(props::coarea(kSeed + 1)); }
TEST(Properties, UpperBounds) { expect_suite(props::upper_bounds(kSeed + 2)); }
TEST(Properties, Isoperimetric) { expect_suite(props::isoperimetric(kSeed + 3), 300); }
TEST(Properties, TranslationBitExact) { expect_suite(props::translation(kSeed + 4)); }
TEST(Properties, CovariogramSymmetryLipschitz) { expect_suite(props::covariogram_shape(kSeed + 5)); }
TEST(Properties, GaugeDuality) { expect_suite(props::gauge_duality(kSeed + 6)); }

TEST(Properties, SuiteRecordsFirstFailure) {
  props::Suite s{"demo"};
  s.record(true, "a");
  s.record(false, "b");
  s.record(false, "c");
  EXPECT_EQ(s.cases, 3);
  EXPECT_EQ(s.failures, 2);
  EXPECT_EQ(s.first_failure, "b");
  EXPECT_FALSE(s.passed());
}
