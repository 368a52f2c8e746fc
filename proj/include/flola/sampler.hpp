#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flola/design.hpp"
#include "flola/error.hpp"
#include "flola/lola.hpp"
#include "flola/random.hpp"
#include "flola/voronoi.hpp"

namespace flola {

enum class ScoringMode {
  hybrid,        // Voronoi volume + normalized nonlinearity
  voronoi_only,  // exploration alone, for baselines
};

struct SamplerConfig {
  explicit SamplerConfig(DesignSpace s)
      : space(std::move(s)), initial(InitialScheme::default_for(space.dim())) {}

  DesignSpace space;
  std::size_t budget = 0;
  double noise_lambda = 0.0;      // metadata; noise is injected by the evaluator
  std::size_t max_neighbors = 0;  // 0 -> 2d
  std::size_t mc_points = 0;      // 0 -> max(1000, 100 n), refreshed every iteration
  std::uint64_t seed = 0;
  InitialScheme initial;
  ScoringMode scoring = ScoringMode::hybrid;

  std::size_t neighbors() const {
    return max_neighbors == 0 ? default_max_neighbors(space.dim()) : max_neighbors;
  }
  std::size_t pool_size(std::size_t n_design) const {
    return mc_points == 0 ? default_pool_size(n_design) : mc_points;
  }

  friend bool operator==(const SamplerConfig&, const SamplerConfig&) = default;
};

struct ScoreTable {
  std::vector<double> v;  // exploration
  std::vector<double> e;  // exploitation
  std::vector<double> h;  // aggregate
  std::size_t iteration = 0;
};

inline constexpr double kFlatScoreThreshold = 1e-12;

/// h_i = v_i + e_i / sum(e). Falls back to h = v when sum(e) < 1e-12.
inline std::vector<double> aggregate_scores(std::span<const double> v, std::span<const double> e) {
  if (v.size() != e.size()) throw UsageError("exploration and exploitation scores differ in length");
  double total = 0.0;
  for (double x : e) {
    if (x < 0.0) throw UsageError("exploitation scores must be non-negative");
    total += x;
  }
  std::vector<double> h(v.begin(), v.end());
  if (total < kFlatScoreThreshold) return h;
  for (std::size_t i = 0; i < h.size(); ++i) h[i] += e[i] / total;
  return h;
}

/// Indices by h descending, then v descending, then index ascending.
inline std::vector<std::size_t> rank(std::span<const double> h, std::span<const double> v) {
  if (h.size() != v.size()) throw UsageError("rank needs equal-length score vectors");
  std::vector<std::size_t> order(h.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (h[a] != h[b]) return h[a] > h[b];
    return v[a] > v[b];
  });
  return order;
}

/// Maximin candidate inside the cell of the best-ranked design point that owns any
/// pool points; the global maximin pool point if no ranked cell offers one. Since every
/// pool point is owned by its nearest design point, its distance to the owner is its
/// distance to the whole design. Returns raw coordinates.
inline Point propose_next(const Design& design, const MonteCarloPool& pool,
                          const ScoreTable& scores) {
  if (pool.size() == 0) throw ConfigurationError("Monte-Carlo pool is empty");
  if (!pool.has_owners()) throw UsageError("pool ownership has not been assigned");
  const std::size_t n = design.size();
  if (scores.h.size() != n || scores.v.size() != n)
    throw UsageError("score table does not match the design");

  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> best_in_cell(n, none);
  std::size_t best_global = none;
  for (std::size_t j = 0; j < pool.size(); ++j) {
    const double dist = pool.owner_distance[j];
    if (dist <= kDuplicateThreshold) continue;
    std::size_t& cell = best_in_cell[pool.owner[j]];
    if (cell == none || dist > pool.owner_distance[cell]) cell = j;
    if (best_global == none || dist > pool.owner_distance[best_global]) best_global = j;
  }

  for (std::size_t i : rank(scores.h, scores.v))
    if (best_in_cell[i] != none) return design.space().denormalize(pool.point(best_in_cell[i]));
  if (best_global == none) throw ConfigurationError("Monte-Carlo pool holds no admissible candidate");
  return design.space().denormalize(pool.point(best_global));
}

// ---------------------------------------------------------------------------
// Run state and the sequential loop

/// Everything needed to continue a run. The initial design is replayed one point per
/// proposal so batch runs and ask/tell sessions walk the same sequence.
struct RunState {
  explicit RunState(SamplerConfig c) : config(std::move(c)), design(config.space) {}

  SamplerConfig config;
  Design design;
  std::vector<Point> initial_points;
  std::size_t iteration = 0;  // adaptive steps committed; the next pool uses counter iteration + 1
  std::optional<Point> pending;

  bool in_initial_phase() const { return design.size() < initial_points.size(); }
  bool done() const { return design.size() >= config.budget; }
};

inline RunState start_run(SamplerConfig config) {
  RunState state(std::move(config));
  state.initial_points = initial_design(state.config.space, state.config.initial, state.config.seed);
  if (state.config.budget < state.initial_points.size())
    throw ConfigurationError("budget " + std::to_string(state.config.budget) +
                             " is smaller than the initial design (" +
                             std::to_string(state.initial_points.size()) + " points)");
  return state;
}

inline MonteCarloPool pool_for_next_step(const RunState& state) {
  const std::uint64_t seed = derive_seed(state.config.seed, Stream::mc_pool, state.iteration + 1);
  MonteCarloPool pool = build_pool(state.config.space, state.config.pool_size(state.design.size()), seed);
  return assign_owners(std::move(pool), state.design);
}

/// Scores of the current design against an owned pool.
inline ScoreTable compute_scores(const RunState& state, const MonteCarloPool& pool) {
  ScoreTable table;
  table.iteration = state.iteration + 1;
  table.v = estimate_volumes(pool, state.design.size()).v;
  if (state.config.scoring == ScoringMode::hybrid)
    table.e = exploitation_scores(state.design, state.config.neighbors());
  else
    table.e.assign(state.design.size(), 0.0);
  table.h = aggregate_scores(table.v, table.e);
  return table;
}

struct Proposal {
  Point point;                       // raw coordinates
  std::size_t iteration = 0;         // 0 for initial-design points
  std::optional<ScoreTable> scores;  // adaptive proposals only
};

/// The next point to evaluate. Pure function of the state.
inline Proposal next_proposal(const RunState& state) {
  if (state.done()) throw BudgetExhaustedError("evaluation budget exhausted");
  if (state.in_initial_phase()) return {state.initial_points[state.design.size()], 0, std::nullopt};
  const MonteCarloPool pool = pool_for_next_step(state);
  ScoreTable scores = compute_scores(state, pool);
  Point x = propose_next(state.design, pool, scores);
  return {std::move(x), state.iteration + 1, std::move(scores)};
}

/// Records the response to `proposal` and advances the state.
inline void commit(RunState& state, const Proposal& proposal, double response) {
  if (state.done()) throw BudgetExhaustedError("evaluation budget exhausted");
  if (!std::isfinite(response)) throw DataError("response is not finite");
  state.design.append({proposal.point, response, proposal.iteration});
  if (proposal.iteration > 0) state.iteration = proposal.iteration;
  state.pending.reset();
}

struct StepResult {
  Proposal proposal;
  double response = 0.0;
};

/// One proposal, one evaluation, one append. On evaluator failure the state is left
/// untouched and the proposed point travels with the EvaluationError.
template <class Evaluator>
StepResult step(RunState& state, Evaluator&& evaluator) {
  Proposal proposal = next_proposal(state);
  double y = 0.0;
  try {
    y = std::invoke(evaluator, std::span<const double>(proposal.point));
  } catch (const std::exception& ex) {
    throw EvaluationError(std::string("evaluator failed: ") + ex.what(), proposal.point);
  }
  if (!std::isfinite(y)) throw EvaluationError("evaluator returned a non-finite response", proposal.point);
  commit(state, proposal, y);
  return {std::move(proposal), y};
}

struct RunResult {
  RunState state;
  std::vector<ScoreTable> history;

  const Design& design() const { return state.design; }
};

/// Steps `state` until the budget is reached.
template <class Evaluator>
void run_to_budget(RunState& state, Evaluator&& evaluator, std::vector<ScoreTable>* history = nullptr) {
  while (!state.done()) {
    StepResult r = step(state, evaluator);
    if (history && r.proposal.scores) history->push_back(std::move(*r.proposal.scores));
  }
}

/// Initial design followed by adaptive steps until the design holds `budget` points.
template <class Evaluator>
RunResult run(SamplerConfig config, Evaluator&& evaluator) {
  RunResult result{start_run(std::move(config)), {}};
  run_to_budget(result.state, evaluator, &result.history);
  return result;
}

}  // namespace flola
