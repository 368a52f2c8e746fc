#include <gtest/gtest.h>

#include <cmath>

#include "flola/sampler.hpp"
#include "flola/testbed.hpp"

namespace flola {
namespace {

// Second, independent transcription of the peaks formula (expanded polynomial form).
double peaks_reference(double x, double y) {
  const double a = 3.0 * (1.0 - 2.0 * x + x * x) * std::exp(-(x * x) - (y * y + 2.0 * y + 1.0));
  const double b = (2.0 * x - 10.0 * x * x * x - 10.0 * y * y * y * y * y) * std::exp(-(x * x + y * y));
  const double c = std::exp(-(x * x + 2.0 * x + 1.0) - y * y) / 3.0;
  return a - b - c;
}

TEST(Peaks, HandValues) {
  EXPECT_NEAR(peaks(0.0, 0.0), 0.98101184312384619092, 1e-14);  // (8/3) e^-1
  EXPECT_NEAR(peaks(0.0, -1.0), -0.72390617279329411325, 1e-14);
  EXPECT_NEAR(peaks(0.5, -1.5), -5.7616133374079457605, 1e-13);
  EXPECT_NEAR(peaks(3.0, 3.0), 0.0, 1e-4);
}

TEST(Peaks, MatchesIndependentTranscription) {
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      const double x = -3.0 + 6.0 * i / 9.0;
      const double y = -3.0 + 6.0 * j / 9.0;
      EXPECT_NEAR(peaks(x, y), peaks_reference(x, y), 1e-12) << x << "," << y;
    }
}

TEST(Evaluator, LinearNoiseFree) {
  auto f = make_evaluator("linear", 0.0, 1, {1.0, 2.0, -3.0});
  EXPECT_DOUBLE_EQ(f(Point{0.5, 0.25}), 1.0 + 1.0 - 0.75);
  EXPECT_EQ(f.calls(), 1u);
}

TEST(Evaluator, Quadratic) {
  auto f = make_evaluator("quadratic", 0.0, 1, {1.0, 0.5, 0.5, 2.0});
  EXPECT_DOUBLE_EQ(f(Point{1.0, 2.0}), 1.0 + 2.0 + 8.0);
}

TEST(Evaluator, PeaksNoiseFree) {
  auto f = make_evaluator("peaks", 0.0, 1);
  EXPECT_NEAR(f(Point{0.0, 0.0}), 0.981012, 1e-6);
}

TEST(Evaluator, NoisyStreamIsSeeded) {
  auto a = make_evaluator("peaks", 1.0, 42);
  auto b = make_evaluator("peaks", 1.0, 42);
  const Point p{0.3, -0.7};
  const double a1 = a(p), a2 = a(p);
  const double b1 = b(p), b2 = b(p);
  EXPECT_NE(a1, a2);
  EXPECT_EQ(a1, b1);
  EXPECT_EQ(a2 - a1, b2 - b1);

  auto c = make_evaluator("peaks", 1.0, 42);
  c.resume_at(1);
  EXPECT_EQ(c(p), a2);
}

TEST(Evaluator, UnknownNameAndBadShapes) {
  EXPECT_THROW(make_evaluator("rosenbrock", 0.0, 1), ConfigurationError);
  auto f = make_evaluator("linear", 0.0, 1, {1.0});
  EXPECT_THROW(f(Point{0.5, 0.5}), UsageError);
  EXPECT_THROW(make_evaluator("peaks", -1.0, 1), DomainError);
}

Design adaptive_line(std::initializer_list<double> xs) {
  Design d(DesignSpace::unit_cube(1));
  d.append({{0.0}, 0.0, 0});
  std::size_t it = 1;
  for (double x : xs) d.append({{x}, 0.0, it++});
  return d;
}

TEST(RegionFraction, Counting) {
  const Region mid{{0.25}, {0.75}};
  EXPECT_EQ(region_fraction(adaptive_line({0.3, 0.4, 0.5}), mid), 1.0);
  EXPECT_EQ(region_fraction(adaptive_line({0.1, 0.9}), mid), 0.0);
  EXPECT_EQ(region_fraction(adaptive_line({0.3, 0.4, 0.5, 0.95}), mid), 0.75);
}

TEST(RegionFraction, InitialPointsExcluded) {
  // The initial point 0.0 is outside; only the adaptive ones are counted.
  EXPECT_EQ(region_fraction(adaptive_line({0.5}), Region{{0.25}, {0.75}}), 1.0);
}

TEST(RegionFraction, WholeDomainIsOne) {
  auto f = make_evaluator("peaks", 0.5, 3);
  SamplerConfig cfg(peaks_domain());
  cfg.budget = 12;
  cfg.seed = 3;
  const auto res = run(cfg, f);
  EXPECT_EQ(region_fraction(res.design(), Region{{-3.0, -3.0}, {3.0, 3.0}}), 1.0);
  Design initial_only(DesignSpace::unit_cube(1));
  initial_only.append({{0.2}, 0.0, 0});
  EXPECT_EQ(region_fraction(initial_only, Region{{0.0}, {1.0}}), 1.0);
  EXPECT_THROW(region_fraction(initial_only, Region{{-1.0}, {1.0}}), UsageError);
}

TEST(NnDistanceStats, Examples) {
  auto s = nn_distance_stats(adaptive_line({0.5, 1.0}));
  EXPECT_NEAR(s.mean, 0.5, 1e-15);
  EXPECT_NEAR(s.cv, 0.0, 1e-15);

  s = nn_distance_stats(adaptive_line({0.1, 1.0}));
  // NN distances 0.1, 0.1, 0.9.
  const double mean = 1.1 / 3.0;
  const double sd = std::sqrt((2 * (0.1 - mean) * (0.1 - mean) + (0.9 - mean) * (0.9 - mean)) / 3.0);
  EXPECT_NEAR(s.mean, 0.36666666666666667, 1e-12);
  EXPECT_NEAR(s.cv, sd / mean, 1e-12);
  EXPECT_NEAR(s.cv, std::sqrt(128.0) / 11.0, 1e-12);  // 1.028519...

  s = nn_distance_stats(adaptive_line({0.7}));
  EXPECT_EQ(s.cv, 0.0);
  EXPECT_THROW(nn_distance_stats(adaptive_line({})), UsageError);
}

}  // namespace
}  // namespace flola
