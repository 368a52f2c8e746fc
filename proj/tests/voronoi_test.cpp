#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "flola/voronoi.hpp"

namespace flola {
namespace {

Design line_design(std::initializer_list<double> xs) {
  Design d(DesignSpace::unit_cube(1));
  for (double x : xs) d.append({{x}, 0.0, 0});
  return d;
}

// Exact cell lengths of a sorted 1-D design on [0, 1]: boundaries at midpoints.
std::vector<double> analytic_cells_1d(const std::vector<double>& sorted) {
  std::vector<double> out(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double lo = i == 0 ? 0.0 : 0.5 * (sorted[i - 1] + sorted[i]);
    const double hi = i + 1 == sorted.size() ? 1.0 : 0.5 * (sorted[i] + sorted[i + 1]);
    out[i] = hi - lo;
  }
  return out;
}

TEST(BuildPool, SinglePointInUnitCube) {
  const auto pool = build_pool(DesignSpace({-3.0, -3.0}, {3.0, 3.0}), 1, 5);
  ASSERT_EQ(pool.size(), 1u);
  for (double c : pool.point(0)) {
    EXPECT_GE(c, 0.0);
    EXPECT_LE(c, 1.0);
  }
}

TEST(BuildPool, UniformMean) {
  const auto pool = build_pool(DesignSpace::unit_cube(1), 100000, 11);
  const double mean = std::accumulate(pool.coords.begin(), pool.coords.end(), 0.0) / 1e5;
  EXPECT_NEAR(mean, 0.5, 0.01);
}

TEST(BuildPool, Deterministic) {
  const auto a = build_pool(DesignSpace::unit_cube(3), 500, 77);
  const auto b = build_pool(DesignSpace::unit_cube(3), 500, 77);
  EXPECT_EQ(a.coords, b.coords);
  EXPECT_THROW(build_pool(DesignSpace::unit_cube(3), 0, 77), UsageError);
}

TEST(AssignOwners, NearestWithLowestIndexTieBreak) {
  const Design d = line_design({0.25, 0.75});
  const auto pool = assign_owners(MonteCarloPool::from_points(1, {0.4, 0.5, 0.9}), d);
  EXPECT_EQ(pool.owner, (std::vector<std::size_t>{0, 0, 1}));
  EXPECT_NEAR(pool.owner_distance[2], 0.15, 1e-15);

  const auto single = assign_owners(build_pool(DesignSpace::unit_cube(1), 50, 1), line_design({0.3}));
  EXPECT_TRUE(std::all_of(single.owner.begin(), single.owner.end(), [](std::size_t o) { return o == 0; }));
}

TEST(AssignOwners, EmptyDesignIsUsageError) {
  EXPECT_THROW(assign_owners(MonteCarloPool::from_points(1, {0.4}), Design(DesignSpace::unit_cube(1))),
               UsageError);
}

TEST(EstimateVolumes, SymmetricPair) {
  const Design d = line_design({0.25, 0.75});
  const auto scores = estimate_volumes(assign_owners(build_pool(d.space(), 100000, 3), d), 2);
  EXPECT_NEAR(scores.v[0], 0.5, 0.01);
  EXPECT_NEAR(scores.v[1], 0.5, 0.01);
}

TEST(EstimateVolumes, SinglePointOwnsEverything) {
  const Design d = line_design({0.6});
  const auto scores = estimate_volumes(assign_owners(build_pool(d.space(), 1000, 3), d), 1);
  EXPECT_EQ(scores.v, std::vector<double>{1.0});
}

TEST(EstimateVolumes, ThreePointAnalyticCells) {
  const auto analytic = analytic_cells_1d({0.0, 0.4, 1.0});
  ASSERT_NEAR(analytic[0], 0.2, 1e-15);
  ASSERT_NEAR(analytic[1], 0.5, 1e-15);
  ASSERT_NEAR(analytic[2], 0.3, 1e-15);
  const Design d = line_design({0.0, 0.4, 1.0});
  const auto scores = estimate_volumes(assign_owners(build_pool(d.space(), 100000, 8), d), 3);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(scores.v[i], analytic[i], 0.01);
}

TEST(EstimateVolumes, CountsSumToPoolSize) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Design d(DesignSpace::unit_cube(3));
    const int n = 1 + trial;
    for (int i = 0; i < n; ++i) d.append({{u(rng), u(rng), u(rng)}, 0.0, 0});
    const std::size_t m = 137 + 31 * trial;
    const auto scores = estimate_volumes(assign_owners(build_pool(d.space(), m, trial), d), d.size());
    EXPECT_EQ(std::accumulate(scores.counts.begin(), scores.counts.end(), std::size_t{0}), m);
    EXPECT_NEAR(std::accumulate(scores.v.begin(), scores.v.end(), 0.0), 1.0, 1e-12);
    for (double v : scores.v) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(EstimateVolumes, RefinementNeverGrowsExistingCells) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Design d(DesignSpace::unit_cube(2));
  for (int i = 0; i < 6; ++i) d.append({{u(rng), u(rng)}, 0.0, 0});
  const auto pool = build_pool(d.space(), 5000, 9);
  auto before = estimate_volumes(assign_owners(pool, d), d.size()).counts;
  for (int step = 0; step < 15; ++step) {
    d.append({{u(rng), u(rng)}, 0.0, 0});
    const auto after = estimate_volumes(assign_owners(pool, d), d.size()).counts;
    for (std::size_t i = 0; i < before.size(); ++i) EXPECT_LE(after[i], before[i]);
    before = after;
  }
}

TEST(EstimateVolumes, InvariantToPoolOrdering) {
  const Design d = line_design({0.1, 0.35, 0.8});
  auto pool = build_pool(d.space(), 2000, 12);
  const auto base = estimate_volumes(assign_owners(pool, d), 3);
  std::mt19937_64 rng(1);
  std::shuffle(pool.coords.begin(), pool.coords.end(), rng);  // d = 1: coords are points
  const auto shuffled = estimate_volumes(assign_owners(pool, d), 3);
  EXPECT_EQ(base.counts, shuffled.counts);
}

TEST(EstimateVolumes, ErrorShrinksWithPoolSize) {
  const Design d = line_design({0.0, 0.4, 1.0});
  const auto analytic = analytic_cells_1d({0.0, 0.4, 1.0});
  std::vector<double> mean_err;
  for (std::size_t m : {1000, 10000, 100000}) {
    double err = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto v = estimate_volumes(assign_owners(build_pool(d.space(), m, seed), d), 3).v;
      double worst = 0.0;
      for (std::size_t i = 0; i < 3; ++i) worst = std::max(worst, std::abs(v[i] - analytic[i]));
      err += worst / 20.0;
    }
    mean_err.push_back(err);
  }
  EXPECT_GT(mean_err[0], mean_err[1]);
  EXPECT_GT(mean_err[1], mean_err[2]);
}

TEST(PoolSize, DefaultGrowsWithDesign) {
  EXPECT_EQ(default_pool_size(1), 1000u);
  EXPECT_EQ(default_pool_size(10), 1000u);
  EXPECT_EQ(default_pool_size(120), 12000u);
}

}  // namespace
}  // namespace flola
