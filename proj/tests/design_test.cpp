#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "flola/design.hpp"

namespace flola {
namespace {

TEST(DesignSpace, RejectsBadBounds) {
  EXPECT_THROW(DesignSpace({}, {}), ConfigurationError);
  EXPECT_THROW(DesignSpace({0.0, 1.0}, {1.0, 1.0}), ConfigurationError);
  EXPECT_THROW(DesignSpace({0.0}, {1.0, 2.0}), ConfigurationError);
  EXPECT_NO_THROW(DesignSpace({-3.0}, {3.0}));
}

TEST(DesignSpace, NormalizeIsIdempotentOnUnitCube) {
  const DesignSpace unit = DesignSpace::unit_cube(3);
  const DesignSpace box({-3.0, 10.0, 0.5}, {3.0, 20.0, 0.75});
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Point raw = box.denormalize(Point{u(rng), u(rng), u(rng)});
    const Point once = box.normalize(raw);
    const Point twice = unit.normalize(once);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(once[k], twice[k]);
    const Point back = box.denormalize(once);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(back[k], raw[k], 1e-12 * (1 + std::abs(raw[k])));
  }
}

TEST(InitialDesign, CornersCenterTwoD) {
  const auto pts = initial_design(DesignSpace({-3.0, -3.0}, {3.0, 3.0}), InitialScheme::corners_center(), 0);
  const std::vector<Point> expected{{-3, -3}, {-3, 3}, {3, -3}, {3, 3}, {0, 0}};
  EXPECT_EQ(pts, expected);
}

TEST(InitialDesign, CornersCenterOneD) {
  const auto pts = initial_design(DesignSpace::unit_cube(1), InitialScheme::corners_center(), 0);
  const std::vector<Point> expected{{0.0}, {1.0}, {0.5}};
  EXPECT_EQ(pts, expected);
}

TEST(InitialDesign, CornersCenterLimitedToTenDimensions) {
  EXPECT_EQ(initial_design(DesignSpace::unit_cube(10), InitialScheme::corners_center(), 0).size(), 1025u);
  EXPECT_THROW(initial_design(DesignSpace::unit_cube(11), InitialScheme::corners_center(), 0),
               ConfigurationError);
}

TEST(InitialDesign, LatinHypercubeStratifiesEveryAxis) {
  const auto pts = initial_design(DesignSpace::unit_cube(2), InitialScheme::latin_hypercube(4), 1234);
  ASSERT_EQ(pts.size(), 4u);
  for (std::size_t k = 0; k < 2; ++k) {
    std::set<int> quarters;
    for (const auto& p : pts) {
      EXPECT_GE(p[k], 0.0);
      EXPECT_LE(p[k], 1.0);
      quarters.insert(std::min(3, static_cast<int>(p[k] * 4.0)));
    }
    EXPECT_EQ(quarters.size(), 4u);
  }
}

TEST(InitialDesign, LatinHypercubeNeedsDPlusOnePoints) {
  EXPECT_THROW(initial_design(DesignSpace::unit_cube(3), InitialScheme::latin_hypercube(3), 0),
               ConfigurationError);
  EXPECT_NO_THROW(initial_design(DesignSpace::unit_cube(3), InitialScheme::latin_hypercube(4), 0));
}

TEST(InitialDesign, SameSeedIsBitReproducible) {
  const DesignSpace box({-1.0, 0.0, 5.0}, {1.0, 2.0, 6.0});
  const auto a = initial_design(box, InitialScheme::latin_hypercube(15), 99);
  const auto b = initial_design(box, InitialScheme::latin_hypercube(15), 99);
  const auto c = initial_design(box, InitialScheme::latin_hypercube(15), 100);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

TEST(InitialDesign, DefaultSchemeSwitchesAtFiveDimensions) {
  EXPECT_EQ(InitialScheme::default_for(4), InitialScheme::corners_center());
  EXPECT_EQ(InitialScheme::default_for(5), InitialScheme::latin_hypercube(25));
}

Design unit_design(std::initializer_list<double> xs) {
  Design d(DesignSpace::unit_cube(1));
  for (double x : xs) d.append({{x}, 0.0, 0});
  return d;
}

TEST(MinDistance, Examples) {
  const Design d = unit_design({0.0, 1.0});
  EXPECT_DOUBLE_EQ(min_distance(Point{0.4}, d), 0.4);
  EXPECT_EQ(min_distance(Point{1.0}, d), 0.0);

  Design d2(DesignSpace::unit_cube(2));
  d2.append({{0.0, 0.0}, 0.0, 0});
  d2.append({{1.0, 1.0}, 0.0, 0});
  EXPECT_NEAR(min_distance(Point{0.5, 0.5}, d2), 0.70710678118654752, 1e-15);
}

TEST(MinDistance, UsesNormalizedCoordinates) {
  Design d(DesignSpace({0.0, 0.0}, {10.0, 1.0}));
  d.append({{0.0, 0.0}, 0.0, 0});
  EXPECT_DOUBLE_EQ(min_distance(Point{5.0, 0.0}, d), 0.5);
  EXPECT_DOUBLE_EQ(min_distance(Point{0.0, 0.5}, d), 0.5);
}

TEST(MinDistance, EmptyDesignIsUsageError) {
  EXPECT_THROW(min_distance(Point{0.1}, Design(DesignSpace::unit_cube(1))), UsageError);
}

TEST(MinDistance, SymmetricAfterInsertion) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Design d(DesignSpace({-2.0, 0.0}, {2.0, 5.0}));
  for (int i = 0; i < 20; ++i) d.append({d.space().denormalize(Point{u(rng), u(rng)}), 0.0, 0});
  const Point cand = d.space().denormalize(Point{u(rng), u(rng)});
  const double dmin = min_distance(cand, d);
  const Design with = validate_and_append(d, {cand, 0.0, 1});
  const auto [nearest, _] = d.nearest_normalized(d.space().normalize(cand));
  EXPECT_DOUBLE_EQ(distance(with.normalized(nearest), with.normalized(d.size())), dmin);
}

TEST(ValidateAndAppend, AppendsAndLeavesInputUntouched) {
  const Design d = unit_design({0.0, 1.0});
  const Design next = validate_and_append(d, {{0.5}, 1.0, 1});
  EXPECT_EQ(d.size(), 2u);
  ASSERT_EQ(next.size(), 3u);
  EXPECT_EQ(next[2].response, 1.0);
  EXPECT_EQ(next[2].iteration, 1u);
}

TEST(ValidateAndAppend, DuplicateReportsDistance) {
  const Design d = unit_design({0.0, 1.0});
  try {
    validate_and_append(d, {{1.0}, 3.0, 1});
    FAIL() << "expected DuplicatePointError";
  } catch (const DuplicatePointError& e) {
    EXPECT_EQ(e.existing_index(), 1u);
    EXPECT_EQ(e.distance(), 0.0);
  }
  EXPECT_THROW(validate_and_append(d, {{1.0 - 1e-14}, 3.0, 1}), DuplicatePointError);
  EXPECT_NO_THROW(validate_and_append(d, {{1.0 - 1e-9}, 3.0, 1}));
}

TEST(ValidateAndAppend, OutOfBoundsRejected) {
  const Design d = unit_design({0.0, 1.0});
  EXPECT_THROW(validate_and_append(d, {{1.5}, 0.0, 1}), BoundsError);
  EXPECT_THROW(validate_and_append(d, {{0.5, 0.5}, 0.0, 1}), UsageError);
}

}  // namespace
}  // namespace flola
