#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "flola/design.hpp"
#include "flola/error.hpp"
#include "flola/random.hpp"

namespace flola {

/// Uniform Monte-Carlo points in the unit cube, optionally tagged with the index of
/// the nearest design point. Cell membership doubles as the candidate set for the
/// next proposal.
struct MonteCarloPool {
  std::size_t dim = 0;
  std::vector<double> coords;          // size() * dim, row-major, unit cube
  std::vector<std::size_t> owner;      // empty until assign_owners
  std::vector<double> owner_distance;  // distance to owner == distance to the design
  std::uint64_t seed = 0;

  std::size_t size() const noexcept { return dim == 0 ? 0 : coords.size() / dim; }
  bool has_owners() const noexcept { return owner.size() == size() && size() > 0; }
  std::span<const double> point(std::size_t j) const { return {coords.data() + j * dim, dim}; }

  static MonteCarloPool from_points(std::size_t dim, std::vector<double> unit_coords) {
    if (dim == 0 || unit_coords.size() % dim != 0)
      throw UsageError("pool coordinates are not a whole number of points");
    MonteCarloPool pool;
    pool.dim = dim;
    pool.coords = std::move(unit_coords);
    return pool;
  }
};

inline std::size_t default_pool_size(std::size_t n_design) {
  return std::max<std::size_t>(1000, 100 * n_design);
}

inline MonteCarloPool build_pool(const DesignSpace& space, std::size_t m, std::uint64_t seed) {
  if (m == 0) throw UsageError("Monte-Carlo pool needs at least one point");
  MonteCarloPool pool;
  pool.dim = space.dim();
  pool.seed = seed;
  pool.coords.resize(m * pool.dim);
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (double& c : pool.coords) c = unif(rng);
  return pool;
}

/// Nearest design point for every pool point, lowest design index on ties.
inline MonteCarloPool assign_owners(MonteCarloPool pool, const Design& design) {
  if (design.empty()) throw UsageError("cannot assign pool owners against an empty design");
  if (pool.dim != design.dim()) throw UsageError("pool and design dimensions differ");
  const std::size_t m = pool.size();
  pool.owner.assign(m, 0);
  pool.owner_distance.assign(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    const auto [index, dist] = design.nearest_normalized(pool.point(j));
    pool.owner[j] = index;
    pool.owner_distance[j] = dist;
  }
  return pool;
}

struct ExplorationScores {
  std::vector<std::size_t> counts;  // pool points per cell; sums to the pool size
  std::vector<double> v;            // counts / M
};

inline ExplorationScores estimate_volumes(const MonteCarloPool& pool, std::size_t n_design) {
  if (n_design == 0) throw UsageError("estimate_volumes needs at least one design point");
  if (!pool.has_owners()) throw UsageError("pool ownership has not been assigned");
  ExplorationScores out;
  out.counts.assign(n_design, 0);
  for (std::size_t o : pool.owner) {
    if (o >= n_design) throw UsageError("pool owner index outside the design");
    ++out.counts[o];
  }
  const double m = static_cast<double>(pool.size());
  out.v.resize(n_design);
  for (std::size_t i = 0; i < n_design; ++i) out.v[i] = static_cast<double>(out.counts[i]) / m;
  return out;
}

}  // namespace flola
