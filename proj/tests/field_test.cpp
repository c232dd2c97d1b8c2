#include <gtest/gtest.h>

#include <vector>

#include "adhs/field.hpp"
#include "adhs/rng.hpp"

namespace adhs {
namespace {

Field three_regions() {
  Field f;
  f.regions = {
      {RectRegion{0, 0, 10, 10}, Timeline::constant(10.0)},
      {RectRegion{20, 0, 30, 10}, Timeline::constant(20.0)},
      {CircleRegion{50, 50, 5}, Timeline{{{0, 10.0}, {5, 30.0}}}},
  };
  return f;
}

TEST(SampleField, InsideRegionA) {
  const auto f = three_regions();
  for (Round t : {0u, 3u, 100u}) EXPECT_EQ(sample_field(f, {5, 5}, t), 10.0);
}

TEST(SampleField, DefaultOutsideAllRegions) {
  EXPECT_EQ(sample_field(three_regions(), {90, 90}, 0), 0.0);
}

TEST(SampleField, TimelineStep) {
  const auto f = three_regions();
  // One-line oracle: the last step whose start is <= round.
  const auto oracle = [](Round t) { return t >= 5 ? 30.0 : 10.0; };
  for (Round t = 0; t < 10; ++t) EXPECT_EQ(sample_field(f, {50, 52}, t), oracle(t));
  EXPECT_EQ(sample_field(f, {50, 52}, 5), 30.0);
}

TEST(SampleField, FirstMatchWinsAndInactiveFallsThrough) {
  Field f;
  f.default_value = -1;
  f.regions = {
      {RectRegion{0, 0, 10, 10}, Timeline{{{3, 7.0}, {6, std::nullopt}}}},
      {RectRegion{0, 0, 20, 20}, Timeline::constant(2.0)},
  };
  EXPECT_EQ(sample_field(f, {1, 1}, 0), 2.0);  // first region not yet on
  EXPECT_EQ(sample_field(f, {1, 1}, 4), 7.0);
  EXPECT_EQ(sample_field(f, {1, 1}, 6), 2.0);  // switched off again
  EXPECT_EQ(sample_field(f, {15, 15}, 4), 2.0);
  EXPECT_EQ(sample_field(f, {25, 25}, 4), -1.0);
}

TEST(Variance, Examples) {
  EXPECT_EQ(variance(std::vector<double>{10, 10, 10}), 0.0);
  EXPECT_NEAR(variance(std::vector<double>{10, 20, 30}), 200.0 / 3.0, 1e-12);
  EXPECT_EQ(variance(std::vector<double>{42}), 0.0);
}

TEST(Variance, SampleKind) {
  EXPECT_NEAR(variance(std::vector<double>{10, 20, 30}, VarianceKind::kSample), 100.0, 1e-12);
  EXPECT_EQ(variance(std::vector<double>{42}, VarianceKind::kSample), 0.0);
}

TEST(Variance, EmptyIsPreconditionError) {
  EXPECT_THROW(variance(std::vector<double>{}), PreconditionError);
}

TEST(Variance, ExactZeroForRepeatedInexactValues) {
  EXPECT_EQ(variance(std::vector<double>{0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1}), 0.0);
}

TEST(Variance, ThresholdClassificationsOfWorkedExample) {
  EXPECT_GT(variance(std::vector<double>{10, 20, 30}), 15.0);
  EXPECT_LE(variance(std::vector<double>{10, 10, 10, 10}), 15.0);
}

TEST(Variance, TranslationInvariantAndQuadraticScaling) {
  Rng rng(77);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.below(20);
    std::vector<double> v(n), shifted(n), scaled(n);
    const double c = rng.uniform(-1000, 1000), a = rng.uniform(-5, 5);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = rng.uniform(-100, 100);
      shifted[i] = v[i] + c;
      scaled[i] = a * v[i];
    }
    const double base = variance(v);
    EXPECT_GE(base, 0.0);
    EXPECT_NEAR(variance(shifted), base, 1e-9 * std::max(1.0, base));
    EXPECT_NEAR(variance(scaled), a * a * base, 1e-9 * std::max(1.0, a * a * base));
  }
}

}  // namespace
}  // namespace adhs
